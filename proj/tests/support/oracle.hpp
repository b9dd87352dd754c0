#pragma once

// Slow reference implementations for the tests. Nothing here uses the log
// or Zech tables, the quadric index, or the PG(3,q) incidence tables:
// elements are coefficient vectors multiplied schoolbook-style and reduced
// by the defining polynomial, and geometry is plain Gaussian elimination.

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

/// GF(p^n) as F_p[x]/(f), f monic with coefficients lowest first. Elements
/// use the same base-p index encoding as the library.
class PolyField {
 public:
  PolyField(std::uint32_t p, std::vector<std::uint32_t> f) : p_(p), n_(static_cast<std::uint32_t>(f.size() - 1)), f_(std::move(f)) {
    size_ = 1;
    for (std::uint32_t i = 0; i < n_; ++i) size_ *= p_;
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t degree() const { return n_; }
  std::uint32_t size() const { return size_; }

  std::vector<std::uint32_t> digits(std::uint32_t a) const {
    std::vector<std::uint32_t> d(n_);
    for (auto& c : d) {
      c = a % p_;
      a /= p_;
    }
    return d;
  }
  std::uint32_t index(const std::vector<std::uint32_t>& d) const {
    std::uint32_t v = 0;
    for (std::size_t i = d.size(); i-- > 0;) v = v * p_ + d[i];
    return v;
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    auto x = digits(a), y = digits(b);
    for (std::uint32_t i = 0; i < n_; ++i) x[i] = (x[i] + y[i]) % p_;
    return index(x);
  }
  std::uint32_t neg(std::uint32_t a) const {
    auto x = digits(a);
    for (auto& c : x) c = (p_ - c) % p_;
    return index(x);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    const auto x = digits(a), y = digits(b);
    std::vector<std::uint64_t> prod(2 * n_, 0);
    for (std::uint32_t i = 0; i < n_; ++i)
      for (std::uint32_t j = 0; j < n_; ++j) prod[i + j] += std::uint64_t{x[i]} * y[j];
    for (auto& c : prod) c %= p_;
    // x^n = -(f_0 + ... + f_{n-1} x^{n-1})
    for (std::size_t k = 2 * n_ - 1; k >= n_; --k) {
      const std::uint64_t c = prod[k];
      if (c == 0) continue;
      prod[k] = 0;
      for (std::uint32_t i = 0; i < n_; ++i) prod[k - n_ + i] = (prod[k - n_ + i] + (p_ - f_[i]) * c) % p_;
    }
    std::vector<std::uint32_t> out(n_);
    for (std::uint32_t i = 0; i < n_; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
    return index(out);
  }

  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1;
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint32_t inv(std::uint32_t a) const { return pow(a, size_ - 2); }

  /// Multiplicative order of a nonzero element, by stepping.
  std::uint64_t order(std::uint32_t a) const {
    std::uint64_t k = 1;
    for (std::uint32_t x = a; x != 1; x = mul(x, a)) ++k;
    return k;
  }

 private:
  std::uint32_t p_, n_;
  std::vector<std::uint32_t> f_;
  std::uint32_t size_;
};

/// E = GF(q^3) with its relative trace and norm to GF(q), computed from
/// Frobenius powers.
class Tower {
 public:
  Tower(std::uint32_t p, std::uint32_t h, std::vector<std::uint32_t> f) : E_(p, std::move(f)), h_(h) {
    q_ = 1;
    for (std::uint32_t i = 0; i < h; ++i) q_ *= p;
    trace_.resize(E_.size());
    norm_.resize(E_.size());
    for (std::uint32_t x = 0; x < E_.size(); ++x) {
      const std::uint32_t x1 = E_.pow(x, q_), x2 = E_.pow(x1, q_);
      trace_[x] = E_.add(E_.add(x, x1), x2);
      norm_[x] = E_.mul(E_.mul(x, x1), x2);
    }
    for (std::uint32_t x = 0; x < E_.size(); ++x)
      if (E_.pow(x, q_) == x) F_.push_back(x);
  }

  const PolyField& E() const { return E_; }
  std::uint32_t q() const { return q_; }
  std::uint32_t T(std::uint32_t x) const { return trace_[x]; }
  std::uint32_t N(std::uint32_t x) const { return norm_[x]; }
  const std::vector<std::uint32_t>& F() const { return F_; }
  bool in_F(std::uint32_t x) const { return std::binary_search(F_.begin(), F_.end(), x); }

  /// Euler's criterion in E: +1, -1 or 0.
  int chi2(std::uint32_t x) const {
    if (x == 0) return 0;
    return E_.pow(x, (E_.size() - 1) / 2) == 1 ? 1 : -1;
  }

  /// Q((u,v)) = T(uv) and its polar form.
  std::uint32_t Q(std::uint32_t u, std::uint32_t v) const { return T(E_.mul(u, v)); }
  std::uint32_t B(std::pair<std::uint32_t, std::uint32_t> a, std::pair<std::uint32_t, std::uint32_t> b) const {
    return T(E_.add(E_.mul(a.first, b.second), E_.mul(b.first, a.second)));
  }

  /// Smallest (u,v) index pair on the F*-line through (u,v).
  std::pair<std::uint32_t, std::uint32_t> projective_key(std::uint32_t u, std::uint32_t v) const {
    std::pair<std::uint32_t, std::uint32_t> best{~0u, ~0u};
    for (auto l : F_) {
      if (l == 0) continue;
      best = std::min(best, std::pair{E_.mul(l, u), E_.mul(l, v)});
    }
    return best;
  }

 private:
  PolyField E_;
  std::uint32_t h_;
  std::uint32_t q_;
  std::vector<std::uint32_t> trace_, norm_, F_;
};

/// Every nonzero (u,v) in E^2 with T(uv) = 0, as projective keys.
inline std::set<std::pair<std::uint32_t, std::uint32_t>> quadric_points(const Tower& t) {
  const auto& E = t.E();
  std::set<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t u = 0; u < E.size(); ++u)
    for (std::uint32_t v = 0; v < E.size(); ++v) {
      if ((u | v) == 0 || t.Q(u, v) != 0) continue;
      out.insert(t.projective_key(u, v));
    }
  return out;
}

/// |p^perp n T| for every p in `pts`, directly from the polar form.
inline std::vector<std::uint32_t> perp_counts(const Tower& t, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pts,
                                              const std::vector<std::pair<std::uint32_t, std::uint32_t>>& T) {
  std::vector<std::uint32_t> out(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (const auto& x : T) out[i] += t.B(pts[i], x) == 0;
  return out;
}

/// Arithmetic in GF(q) given as a list of E elements, with the list
/// position as the label (the library's subfield codes are positions in
/// increasing index order, so the labels agree).
class SmallField {
 public:
  explicit SmallField(const Tower& t) : q_(t.q()), elems_(t.F()) {
    const auto& E = t.E();
    add_.assign(q_ * q_, 0);
    mul_.assign(q_ * q_, 0);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) {
        add_[a * q_ + b] = label(E.add(elems_[a], elems_[b]));
        mul_[a * q_ + b] = label(E.mul(elems_[a], elems_[b]));
      }
    inv_.assign(q_, 0);
    neg_.assign(q_, 0);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) {
        if (mul(a, b) == 1) inv_[a] = b;
        if (add(a, b) == 0) neg_[a] = b;
      }
  }
  std::uint32_t size() const { return q_; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * q_ + b]; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[a * q_ + b]; }
  std::uint32_t inv(std::uint32_t a) const { return inv_[a]; }
  std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }

 private:
  std::uint32_t label(std::uint32_t e) const {
    return static_cast<std::uint32_t>(std::lower_bound(elems_.begin(), elems_.end(), e) - elems_.begin());
  }
  std::uint32_t q_;
  std::vector<std::uint32_t> elems_;
  std::vector<std::uint32_t> add_, mul_, inv_, neg_;
};

using V4 = std::array<std::uint32_t, 4>;

/// Rank of a list of vectors over GF(q).
inline int rank(const SmallField& F, std::vector<V4> rows) {
  int r = 0;
  for (int c = 0; c < 4 && r < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    const std::uint32_t inv = F.inv(rows[r][c]);
    for (auto& x : rows[r]) x = F.mul(x, inv);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const std::uint32_t m = F.neg(rows[i][c]);
      for (int k = 0; k < 4; ++k) rows[i][k] = F.add(rows[i][k], F.mul(m, rows[r][k]));
    }
    ++r;
  }
  return r;
}

/// Two lines given by spanning pairs meet iff their four vectors span at
/// most a plane.
inline bool lines_meet(const SmallField& F, const std::pair<V4, V4>& a, const std::pair<V4, V4>& b) {
  return rank(F, {a.first, a.second, b.first, b.second}) <= 3;
}

inline bool point_on_line(const SmallField& F, const V4& P, const std::pair<V4, V4>& l) {
  return rank(F, {l.first, l.second, P}) == 2;
}

inline V4 apply(const SmallField& F, const std::array<V4, 4>& A, const V4& x) {
  V4 y{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) y[i] = F.add(y[i], F.mul(A[i][k], x[k]));
  return y;
}

/// Gauss sum of the E-character alpha^k -> exp(2 pi i m k / (|E|-1)), with
/// the additive character from the absolute trace; logs by stepping alpha.
inline std::complex<double> gauss_sum(const PolyField& E, std::uint32_t alpha, std::uint64_t m) {
  const std::uint64_t M = E.size() - 1;
  std::complex<double> g = 0;
  std::uint32_t x = 1;
  for (std::uint64_t k = 0; k < M; ++k) {
    // absolute trace = sum of x^(p^i), landing in F_p
    std::uint32_t tr = 0, y = x;
    for (std::uint32_t i = 0; i < E.degree(); ++i) {
      tr = E.add(tr, y);
      y = E.pow(y, E.p());
    }
    const double ang = 2 * std::numbers::pi * (static_cast<double>((m * k) % M) / M + static_cast<double>(tr) / E.p());
    g += std::polar(1.0, ang);
    x = E.mul(x, alpha);
  }
  return g;
}

}  // namespace oracle
