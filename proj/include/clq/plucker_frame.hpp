#pragma once

// Coordinates on V = E^2 over F, and a change of basis bringing Q(u,v) = T(uv)
// to p01 p23 + p02 p31 + p03 p12.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "clq/error.hpp"
#include "clq/field_tower.hpp"
#include "clq/flinalg.hpp"
#include "clq/report.hpp"

namespace clq {

class PluckerFrame {
 public:
  explicit PluckerFrame(const FieldTower& t) : t_(&t), F_(t), basis_(t) {
    const auto& b = basis_.basis();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) gram_[i][j] = F_.code(t.trace(t.mul(b[i], b[j])));
    build();
  }

  const FieldTower& tower() const { return *t_; }
  const Subfield& subfield() const { return F_; }
  const SubfieldBasis& basis() const { return basis_; }
  bool swapped() const { return swapped_; }

  /// F^6 coordinates of (u,v) in the basis (b_i,0), (0,b_i).
  FVector coordinates(Element u, Element v) const {
    const auto cu = basis_.coordinates(u), cv = basis_.coordinates(v);
    FVector x(6);
    for (int i = 0; i < 3; ++i) {
      x[i] = F_.code(cu[i]);
      x[3 + i] = F_.code(cv[i]);
    }
    return x;
  }

  Code form(const FVector& x) const {
    Code s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s = F_.add(s, F_.mul(gram_[i][j], F_.mul(x[i], x[3 + j])));
    return s;
  }
  Code bilinear(const FVector& x, const FVector& y) const {
    Code s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Code c = F_.add(F_.mul(x[i], y[3 + j]), F_.mul(y[i], x[3 + j]));
        s = F_.add(s, F_.mul(gram_[i][j], c));
      }
    return s;
  }
  static Code standard_form(const Subfield& F, const FVector& y) {
    return F.add(F.add(F.mul(y[0], y[5]), F.mul(y[1], y[4])), F.mul(y[2], y[3]));
  }

  /// (p01, p02, p03, p12, p31, p23)
  FVector plucker(const FVector& x) const { return mat_vec(F_, M_, x); }
  FVector plucker(Element u, Element v) const { return plucker(coordinates(u, v)); }

  /// Exchange the two families of generators (swap the third hyperbolic pair).
  void swap_families() {
    swapped_ = !swapped_;
    for (auto& row : P_) std::swap(row[2], row[3]);
    M_ = inverse(F_, P_);
  }

 private:
  void build() {
    FMatrix W = identity_matrix(6);
    std::array<FVector, 3> es, fs;
    for (int r = 0; r < 3; ++r) {
      es[r] = find_singular(W);
      FVector f;
      for (const auto& w : W)
        if (bilinear(es[r], w) != 0) {
          f = w;
          break;
        }
      if (f.empty()) throw Error(ErrorCode::FrameFailure, "degenerate subspace");
      f = scaled(F_, F_.inv(bilinear(es[r], f)), f);
      f = axpy(F_, f, F_.neg(form(f)), es[r]);
      fs[r] = f;
      FMatrix next;
      for (const auto& w : W) {
        FVector x = axpy(F_, w, F_.neg(bilinear(w, f)), es[r]);
        x = axpy(F_, x, F_.neg(bilinear(w, es[r])), f);
        next.push_back(x);
      }
      rref(F_, next);
      W = next;
    }
    if (!W.empty()) throw Error(ErrorCode::FrameFailure, "projection left a remainder");
    const std::array<FVector, 6> cols{es[0], es[1], es[2], fs[2], fs[1], fs[0]};
    P_.assign(6, FVector(6));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) P_[i][j] = cols[j][i];
    M_ = inverse(F_, P_);
    if (M_.empty()) throw Error(ErrorCode::FrameFailure, "frame is singular");
  }

  FVector find_singular(const FMatrix& W) const {
    const std::size_t d = W.size();
    const std::uint32_t q = F_.size();
    std::vector<Code> c(d, 0);
    for (;;) {
      std::size_t k = 0;
      while (k < d && ++c[k] == q) c[k++] = 0;
      if (k == d) break;
      FVector x(6, 0);
      for (std::size_t i = 0; i < d; ++i) x = axpy(F_, x, c[i], W[i]);
      if (!is_zero_vector(x) && form(x) == 0) return x;
    }
    throw Error(ErrorCode::FrameFailure, "no singular vector");
  }

  const FieldTower* t_;
  Subfield F_;
  SubfieldBasis basis_;
  std::array<std::array<Code, 3>, 3> gram_{};
  FMatrix P_, M_;
  bool swapped_ = false;
};

/// Q(x) = Qstd(Mx) on unit vectors, pairwise sums, random vectors, and
/// against T(uv) evaluated in E.
inline CheckReport verify_plucker_frame(const PluckerFrame& fr, std::size_t random_vectors = 1000,
                                        std::uint64_t seed = 1) {
  const Subfield& F = fr.subfield();
  CheckReport r("plucker_frame");
  auto check = [&](const FVector& x) {
    r.expect(fr.form(x) == PluckerFrame::standard_form(F, fr.plucker(x)), [&] {
      std::string s = "x=(";
      for (auto c : x) s += std::to_string(c) + ",";
      return s + ")";
    });
  };
  for (int i = 0; i < 6; ++i) {
    FVector x(6, 0);
    x[i] = 1;
    check(x);
    for (int j = i + 1; j < 6; ++j) {
      FVector y = x;
      y[j] = 1;
      check(y);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, F.size() - 1);
  for (std::size_t k = 0; k < random_vectors; ++k) {
    FVector x(6);
    for (auto& c : x) c = static_cast<Code>(pick(rng));
    check(x);
  }
  const FieldTower& t = fr.tower();
  std::uniform_int_distribution<std::uint32_t> pickE(0, t.size() - 1);
  for (std::size_t k = 0; k < random_vectors; ++k) {
    const Element u{pickE(rng)}, v{pickE(rng)};
    r.expect(F.code(t.trace(t.mul(u, v))) == fr.form(fr.coordinates(u, v)),
             [&] { return "T(uv) mismatch at u=" + std::to_string(u.index) + " v=" + std::to_string(v.index); });
  }
  return r;
}

}  // namespace clq
