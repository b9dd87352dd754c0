#pragma once

// PG(3,q): ranked points, lines and planes with incidence lists, the Klein
// correspondence from the quadric, and line classes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "clq/error.hpp"
#include "clq/flinalg.hpp"
#include "clq/klein_quadric.hpp"
#include "clq/plucker_frame.hpp"
#include "clq/report.hpp"

namespace clq {

using Vec4 = std::array<Code, 4>;

class Pg3Scene {
 public:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  Pg3Scene(const Subfield& F, bool with_planes) : F_(F), q_(F.size()) {
    const std::uint64_t q = q_;
    n_points_ = static_cast<std::uint32_t>(q * q * q + q * q + q + 1);
    n_lines_ = static_cast<std::uint32_t>((q * q + 1) * (q * q + q + 1));
    star_size_ = static_cast<std::uint32_t>(q * q + q + 1);
    std::uint32_t off = 0;
    for (int k = 0; k < 6; ++k) {
      pair_offset_[k] = off;
      off += ipow(q_, free_count(k));
    }
    if (off != n_lines_) throw Error(ErrorCode::FrameFailure, "line ranking is off");

    line_points_.resize(std::size_t{n_lines_} * (q_ + 1));
    for (std::uint32_t L = 0; L < n_lines_; ++L) {
      const auto [a, b] = line_basis(L);
      auto* out = &line_points_[std::size_t{L} * (q_ + 1)];
      out[0] = point_id(b);
      for (Code lam = 0; lam < q_; ++lam) out[1 + lam] = point_id(add_scaled(a, lam, b));
      std::sort(out, out + q_ + 1);
    }
    point_lines_ = invert(line_points_, q_ + 1, n_points_, star_size_);
    if (with_planes) {
      line_planes_.resize(std::size_t{n_lines_} * (q_ + 1));
      for (std::uint32_t L = 0; L < n_lines_; ++L) {
        const auto [a, b] = line_basis(L);
        const FMatrix ns = nullspace(F_, {FVector(a.begin(), a.end()), FVector(b.begin(), b.end())}, 4);
        const Vec4 c{ns[0][0], ns[0][1], ns[0][2], ns[0][3]}, d{ns[1][0], ns[1][1], ns[1][2], ns[1][3]};
        auto* out = &line_planes_[std::size_t{L} * (q_ + 1)];
        out[0] = point_id(d);
        for (Code lam = 0; lam < q_; ++lam) out[1 + lam] = point_id(add_scaled(c, lam, d));
        std::sort(out, out + q_ + 1);
      }
      plane_lines_ = invert(line_planes_, q_ + 1, n_points_, star_size_);
    }
  }

  const Subfield& subfield() const { return F_; }
  std::uint32_t q() const { return q_; }
  std::uint32_t num_points() const { return n_points_; }
  std::uint32_t num_planes() const { return n_points_; }
  std::uint32_t num_lines() const { return n_lines_; }
  bool has_planes() const { return !line_planes_.empty(); }

  std::span<const std::uint32_t> line_points(std::uint32_t L) const {
    return {&line_points_[std::size_t{L} * (q_ + 1)], q_ + 1};
  }
  std::span<const std::uint32_t> point_lines(std::uint32_t P) const {
    return {&point_lines_[std::size_t{P} * star_size_], star_size_};
  }
  std::span<const std::uint32_t> line_planes(std::uint32_t L) const {
    require_planes();
    return {&line_planes_[std::size_t{L} * (q_ + 1)], q_ + 1};
  }
  std::span<const std::uint32_t> plane_lines(std::uint32_t t) const {
    require_planes();
    return {&plane_lines_[std::size_t{t} * star_size_], star_size_};
  }

  /// Normalized vector (leading nonzero entry 1) of a point; planes share the
  /// same ranking as dual vectors.
  Vec4 point_vec(std::uint32_t id) const {
    Vec4 v{0, 0, 0, 0};
    std::uint32_t lead = 0, off = 0;
    while (id >= off + ipow(q_, 3 - lead)) off += ipow(q_, 3 - lead++);
    std::uint32_t r = id - off;
    v[lead] = 1;
    for (int k = 3; k > static_cast<int>(lead); --k) {
      v[k] = static_cast<Code>(r % q_);
      r /= q_;
    }
    return v;
  }
  Vec4 plane_vec(std::uint32_t id) const { return point_vec(id); }

  std::uint32_t point_id(Vec4 v) const {
    int lead = 0;
    while (lead < 4 && v[lead] == 0) ++lead;
    if (lead == 4) throw Error(ErrorCode::FrameFailure, "zero vector is not a point");
    const Code inv = F_.inv(v[lead]);
    std::uint32_t off = 0;
    for (int k = 0; k < lead; ++k) off += ipow(q_, 3 - k);
    std::uint32_t r = 0;
    for (int k = lead + 1; k < 4; ++k) r = r * q_ + F_.mul(v[k], inv);
    return off + r;
  }
  std::uint32_t plane_id(Vec4 v) const { return point_id(v); }

  bool incident(std::uint32_t point, std::uint32_t plane) const {
    const Vec4 a = point_vec(point), b = plane_vec(plane);
    Code s = 0;
    for (int k = 0; k < 4; ++k) s = F_.add(s, F_.mul(a[k], b[k]));
    return s == 0;
  }

  /// RREF basis of a line.
  std::array<Vec4, 2> line_basis(std::uint32_t id) const {
    int k = 5;
    while (id < pair_offset_[k]) --k;
    std::uint32_t r = id - pair_offset_[k];
    const auto [a, b] = kPairs[k];
    Vec4 u{0, 0, 0, 0}, w{0, 0, 0, 0};
    u[a] = 1;
    w[b] = 1;
    // free entries, most significant first: row one then row two
    std::array<Code*, 4> slots{};
    int n = 0;
    for (int j = a + 1; j < 4; ++j)
      if (j != b) slots[n++] = &u[j];
    for (int j = b + 1; j < 4; ++j) slots[n++] = &w[j];
    for (int s = n - 1; s >= 0; --s) {
      *slots[s] = static_cast<Code>(r % q_);
      r /= q_;
    }
    return {u, w};
  }

  std::uint32_t line_id(const Vec4& x, const Vec4& y) const {
    FMatrix m{FVector(x.begin(), x.end()), FVector(y.begin(), y.end())};
    const auto piv = rref(F_, m);
    if (piv.size() != 2) throw Error(ErrorCode::FrameFailure, "vectors do not span a line");
    int k = 0;
    while (kPairs[k][0] != static_cast<int>(piv[0]) || kPairs[k][1] != static_cast<int>(piv[1])) ++k;
    const int a = kPairs[k][0], b = kPairs[k][1];
    std::uint32_t r = 0;
    for (int j = a + 1; j < 4; ++j)
      if (j != b) r = r * q_ + m[0][j];
    for (int j = b + 1; j < 4; ++j) r = r * q_ + m[1][j];
    return pair_offset_[k] + r;
  }

  std::uint32_t line_through(std::uint32_t P, std::uint32_t R) const { return line_id(point_vec(P), point_vec(R)); }

  /// Common point of two lines, or kNone.
  std::uint32_t meet(std::uint32_t L, std::uint32_t M) const {
    const auto a = line_points(L), b = line_points(M);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) return a[i];
      a[i] < b[j] ? ++i : ++j;
    }
    return kNone;
  }

  bool on_line(std::uint32_t P, std::uint32_t L) const {
    const auto pts = line_points(L);
    return std::binary_search(pts.begin(), pts.end(), P);
  }
  bool in_plane(std::uint32_t L, std::uint32_t plane) const {
    const auto pts = line_points(L);
    return incident(pts[0], plane) && incident(pts[1], plane);
  }

  Vec4 apply(const FMatrix& A, const Vec4& v) const {
    Vec4 out{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[i] = F_.add(out[i], F_.mul(A[i][j], v[j]));
    return out;
  }
  std::uint32_t apply_to_line(const FMatrix& A, std::uint32_t L) const {
    const auto [a, b] = line_basis(L);
    return line_id(apply(A, a), apply(A, b));
  }

 private:
  static constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  static int free_count(int k) {
    const int a = kPairs[k][0], b = kPairs[k][1];
    return (3 - a - 1) + (3 - b);
  }
  static std::uint32_t ipow(std::uint32_t b, int e) {
    std::uint32_t r = 1;
    while (e-- > 0) r *= b;
    return r;
  }
  Vec4 add_scaled(const Vec4& a, Code lam, const Vec4& b) const {
    Vec4 out;
    for (int k = 0; k < 4; ++k) out[k] = F_.add(a[k], F_.mul(lam, b[k]));
    return out;
  }
  void require_planes() const {
    if (line_planes_.empty()) throw Error(ErrorCode::ResourceCap, "plane incidences were not built");
  }
  static std::vector<std::uint32_t> invert(const std::vector<std::uint32_t>& rows, std::uint32_t width,
                                           std::uint32_t targets, std::uint32_t per_target) {
    std::vector<std::uint32_t> out(std::size_t{targets} * per_target);
    std::vector<std::uint32_t> fill(targets, 0);
    const std::size_t n = rows.size() / width;
    for (std::size_t L = 0; L < n; ++L)
      for (std::uint32_t k = 0; k < width; ++k) {
        const std::uint32_t t = rows[L * width + k];
        if (fill[t] == per_target) throw Error(ErrorCode::FrameFailure, "incidence overflow");
        out[std::size_t{t} * per_target + fill[t]++] = static_cast<std::uint32_t>(L);
      }
    return out;
  }

  Subfield F_;
  std::uint32_t q_;
  std::uint32_t n_points_ = 0, n_lines_ = 0, star_size_ = 0;
  std::array<std::uint32_t, 6> pair_offset_{};
  std::vector<std::uint32_t> line_points_, point_lines_, line_planes_, plane_lines_;
};

/// Line of PG(3,q) with the given Plücker coordinates (p01,p02,p03,p12,p31,p23).
inline std::uint32_t line_from_plucker(const Pg3Scene& sc, const FVector& y) {
  const Subfield& F = sc.subfield();
  Code m[4][4] = {};
  auto set = [&](int i, int j, Code v) {
    m[i][j] = v;
    m[j][i] = F.neg(v);
  };
  set(0, 1, y[0]);
  set(0, 2, y[1]);
  set(0, 3, y[2]);
  set(1, 2, y[3]);
  set(1, 3, F.neg(y[4]));
  set(2, 3, y[5]);
  FMatrix cols;
  for (int j = 0; j < 4; ++j) cols.push_back({m[0][j], m[1][j], m[2][j], m[3][j]});
  const auto piv = rref(F, cols);
  if (piv.size() != 2) throw Error(ErrorCode::FrameFailure, "Plücker vector has rank " + std::to_string(piv.size()));
  return sc.line_id({cols[0][0], cols[0][1], cols[0][2], cols[0][3]}, {cols[1][0], cols[1][1], cols[1][2], cols[1][3]});
}

/// Quadric point index <-> line id. pi1 goes to the star of a point p0 and
/// pi2 to the lines of a plane pi.
struct KleinMap {
  std::vector<std::uint32_t> line_of;   // by quadric point
  std::vector<std::uint32_t> point_of;  // by line id
  std::uint32_t p0 = Pg3Scene::kNone;
  std::uint32_t pi = Pg3Scene::kNone;  // only when planes are built
  bool swapped = false;
};

namespace detail {

inline std::uint32_t common_point(const Pg3Scene& sc, const std::vector<std::uint32_t>& lines) {
  if (lines.size() < 2) return Pg3Scene::kNone;
  const std::uint32_t P = sc.meet(lines[0], lines[1]);
  if (P == Pg3Scene::kNone) return P;
  for (auto L : lines)
    if (!sc.on_line(P, L)) return Pg3Scene::kNone;
  return P;
}

}  // namespace detail

inline KleinMap build_klein_map(const Quadric& Qd, PluckerFrame& frame, const Pg3Scene& sc) {
  const std::uint32_t n = static_cast<std::uint32_t>(Qd.size());
  if (n != sc.num_lines()) throw Error(ErrorCode::SizeMismatch, "quadric and line counts differ");
  KleinMap km;
  auto fill = [&] {
    km.line_of.assign(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto& p = Qd.point(i);
      km.line_of[i] = line_from_plucker(sc, frame.plucker(p.u, p.v));
    }
  };
  auto pi1_lines = [&] {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < n; ++i)
      if (Qd.in_pi1(i)) out.push_back(km.line_of[i]);
    return out;
  };
  fill();
  km.p0 = detail::common_point(sc, pi1_lines());
  if (km.p0 == Pg3Scene::kNone) {
    frame.swap_families();
    fill();
    km.p0 = detail::common_point(sc, pi1_lines());
    if (km.p0 == Pg3Scene::kNone) throw Error(ErrorCode::FrameFailure, "pi1 is not a star in either family");
  }
  km.swapped = frame.swapped();
  km.point_of.assign(sc.num_lines(), Quadric::kAbsent);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (km.point_of[km.line_of[i]] != Quadric::kAbsent) throw Error(ErrorCode::FrameFailure, "Klein map is not injective");
    km.point_of[km.line_of[i]] = i;
  }
  if (sc.has_planes()) {
    // pi: the plane containing every pi2 line
    std::vector<std::uint32_t> pi2;
    for (std::uint32_t i = 0; i < n; ++i)
      if (Qd.in_pi2(i)) pi2.push_back(km.line_of[i]);
    for (auto t : sc.line_planes(pi2[0])) {
      bool all = true;
      for (auto L : pi2) all = all && sc.in_plane(L, t);
      if (all) km.pi = t;
    }
    if (km.pi == Pg3Scene::kNone) throw Error(ErrorCode::FrameFailure, "pi2 is not the line set of a plane");
  }
  return km;
}

/// Bijectivity, the star/plane images of pi1/pi2, and collinearity on the
/// quadric against intersection of lines on sampled pairs.
inline std::vector<CheckReport> verify_klein_map(const Quadric& Qd, const Pg3Scene& sc, const KleinMap& km,
                                                 std::size_t pairs = 10'000, std::uint64_t seed = 1) {
  std::vector<CheckReport> out;
  const std::uint32_t n = static_cast<std::uint32_t>(Qd.size());
  {
    CheckReport r("klein_bijection", n);
    for (std::uint32_t L = 0; L < sc.num_lines(); ++L)
      r.expect(km.point_of[L] != Quadric::kAbsent, [&] { return "line " + std::to_string(L) + " has no preimage"; });
    for (std::uint32_t i = 0; i < n; ++i) {
      // independent check that the image line is built from the same point
      const auto& p = Qd.point(i);
      r.expect(km.point_of[km.line_of[i]] == i && Qd.on_quadric(p.u, p.v), [&] { return "point " + std::to_string(i); });
    }
    r.domain_size = n;
    out.push_back(r);
  }
  {
    CheckReport r("klein_generators");
    std::uint32_t star = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (Qd.in_pi1(i)) {
        ++star;
        r.expect(sc.on_line(km.p0, km.line_of[i]), [&] { return "pi1 point off the star"; });
      }
      if (Qd.in_pi2(i) && km.pi != Pg3Scene::kNone)
        r.expect(sc.in_plane(km.line_of[i], km.pi), [&] { return "pi2 point off the plane"; });
    }
    for (auto L : sc.point_lines(km.p0))
      r.expect(Qd.in_pi1(km.point_of[L]), [&] { return "star line not from pi1"; });
    if (km.pi != Pg3Scene::kNone) {
      for (auto L : sc.plane_lines(km.pi))
        r.expect(Qd.in_pi2(km.point_of[L]), [&] { return "plane line not from pi2"; });
      r.expect(!sc.incident(km.p0, km.pi), [&] { return "p0 lies on pi"; });
    }
    r.details["p0"] = km.p0;
    r.details["pi"] = km.pi;
    r.details["families_swapped"] = km.swapped;
    out.push_back(r);
  }
  {
    CheckReport r("klein_collinearity");
    r.scope = "sampled";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    for (std::size_t k = 0; k < pairs; ++k) {
      const std::uint32_t i = pick(rng);
      // half of the pairs are forced to be collinear so both outcomes occur
      std::uint32_t j = pick(rng);
      if (k % 2 == 0) {
        const auto pts = sc.line_points(km.line_of[i]);
        const auto lines = sc.point_lines(pts[j % pts.size()]);
        j = km.point_of[lines[j % lines.size()]];
      }
      const bool coll = Qd.collinear(i, j);
      const bool meets = sc.meet(km.line_of[i], km.line_of[j]) != Pg3Scene::kNone;
      r.expect(coll == meets, [&] { return "pair " + std::to_string(i) + "," + std::to_string(j); });
    }
    r.domain_size = pairs;
    out.push_back(r);
  }
  return out;
}

/// A set of lines with membership flags.
struct LineClass {
  std::string label;
  std::uint64_t x = 0;
  std::vector<std::uint32_t> lines;  // sorted
  std::vector<char> member;

  std::size_t size() const { return lines.size(); }
  bool contains(std::uint32_t L) const { return member[L] != 0; }
};

inline LineClass make_line_class(std::string label, std::uint64_t x, std::vector<std::uint32_t> lines,
                                 std::uint32_t num_lines) {
  LineClass lc;
  lc.label = std::move(label);
  lc.x = x;
  std::sort(lines.begin(), lines.end());
  lc.lines = std::move(lines);
  lc.member.assign(num_lines, 0);
  for (auto L : lc.lines) lc.member[L] = 1;
  return lc;
}

inline LineClass transfer(const KleinMap& km, const std::vector<std::uint32_t>& quadric_points, std::string label,
                          std::uint64_t x) {
  std::vector<std::uint32_t> lines;
  lines.reserve(quadric_points.size());
  for (auto i : quadric_points) lines.push_back(km.line_of[i]);
  return make_line_class(std::move(label), x, std::move(lines), static_cast<std::uint32_t>(km.point_of.size()));
}

/// The regular spread from F_{q^2} = F[t]/(t^2 - nu), nu a nonsquare.
inline std::vector<std::uint32_t> regular_spread(const Pg3Scene& sc) {
  const Subfield& F = sc.subfield();
  Code nu = 1;
  while (F.is_square(nu)) ++nu;
  std::vector<std::uint32_t> out;
  for (Code m0 = 0; m0 < sc.q(); ++m0)
    for (Code m1 = 0; m1 < sc.q(); ++m1)
      out.push_back(sc.line_id({1, 0, m0, m1}, {0, 1, F.mul(nu, m1), m0}));
  out.push_back(sc.line_id({0, 0, 1, 0}, {0, 0, 0, 1}));
  return out;
}

inline FMatrix random_invertible(const Subfield& F, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, F.size() - 1);
  for (;;) {
    FMatrix A(4, FVector(4));
    for (auto& row : A)
      for (auto& c : row) c = static_cast<Code>(pick(rng));
    if (rank(F, A) == 4) return A;
  }
}

}  // namespace clq
