#pragma once

// Arithmetic in F_p ⊂ F = GF(q) ⊂ E = GF(q^3), q = p^h.
//
// E is built once as F_p[x]/(f) with f the least primitive polynomial of
// degree 3h, and F is the fixed field of x -> x^q inside it. Elements are
// addressed by the base-p encoding of their coefficient vector, so the
// prime-field element c has index c. Multiplication goes through discrete
// log tables and addition through a Zech table.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "clq/error.hpp"

namespace clq {

struct Element {
  std::uint32_t index = 0;

  constexpr bool is_zero() const { return index == 0; }
  friend constexpr auto operator<=>(Element, Element) = default;
};

enum class OmegaSign { minus, plus };

inline const char* to_string(OmegaSign s) { return s == OmegaSign::minus ? "minus" : "plus"; }

struct TowerOptions {
  /// omega = alpha^(-(q^2+q+1)) for `minus`, alpha^(q^2+q+1) for `plus`.
  OmegaSign omega_sign = OmegaSign::minus;
  /// Upper bound on p^(3h), the number of entries in each lookup table.
  std::uint64_t max_table_entries = std::uint64_t{1} << 28;
};

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t ipow(std::uint64_t base, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Dense polynomials over F_p, lowest coefficient first, used only while
// searching for the defining polynomial.
using Poly = std::vector<std::uint32_t>;

inline Poly mul_mod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
  const std::size_t n = f.size() - 1;
  std::vector<std::uint64_t> prod(2 * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  }
  for (std::size_t k = 2 * n - 1; k >= n; --k) {
    const std::uint64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    // x^n = -(f_0 + ... + f_{n-1} x^{n-1})
    for (std::size_t i = 0; i < n; ++i)
      prod[k - n + i] = (prod[k - n + i] + (p - f[i]) % p * c) % p;
  }
  Poly out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return out;
}

inline Poly pow_x_mod(std::uint64_t e, const Poly& f, std::uint32_t p) {
  const std::size_t n = f.size() - 1;
  Poly result(n, 0), base(n, 0);
  result[0] = 1;
  base[1 % n] = (n == 1) ? (p - f[0]) % p : 1;
  while (e > 0) {
    if (e & 1) result = mul_mod(result, base, f, p);
    base = mul_mod(base, base, f, p);
    e >>= 1;
  }
  return result;
}

inline bool is_one(const Poly& a) {
  if (a[0] != 1) return false;
  return std::all_of(a.begin() + 1, a.end(), [](std::uint32_t c) { return c == 0; });
}

// x has order p^n - 1 modulo f iff f is primitive (an element of that order
// cannot exist in F_p[x]/(f) unless the quotient is a field).
inline bool is_primitive(const Poly& f, std::uint32_t p, std::uint64_t group_order,
                         const std::vector<std::uint64_t>& factors) {
  if (f[0] == 0) return false;
  if (!is_one(pow_x_mod(group_order, f, p))) return false;
  for (auto r : factors)
    if (is_one(pow_x_mod(group_order / r, f, p))) return false;
  return true;
}

}  // namespace detail

class FieldTower {
 public:
  static constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

  static FieldTower build(std::uint32_t p, std::uint32_t h, TowerOptions options = {}) {
    if (!detail::is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    if (h == 0) throw Error(ErrorCode::BadFlag, "extension degree h must be positive");
    const std::uint32_t n = 3 * h;
    // p^n must fit the tables; check without overflow.
    std::uint64_t size = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      size *= p;
      if (size > options.max_table_entries || size > (std::uint64_t{1} << 31))
        throw Error(ErrorCode::DegreeTooLarge,
                    "p^(3h) exceeds the table cap for p=" + std::to_string(p) + ", h=" + std::to_string(h));
    }
    FieldTower t;
    t.p_ = p;
    t.h_ = h;
    t.degree_ = n;
    t.q_ = static_cast<std::uint32_t>(detail::ipow(p, h));
    t.size_ = static_cast<std::uint32_t>(size);
    t.order_ = t.size_ - 1;
    t.sign_ = options.omega_sign;
    t.find_polynomial();
    t.build_tables();
    return t;
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t h() const { return h_; }
  std::uint32_t q() const { return q_; }
  /// Degree of E over F_p, i.e. 3h.
  std::uint32_t degree() const { return degree_; }
  /// |E| = q^3.
  std::uint32_t size() const { return size_; }
  /// |E*| = q^3 - 1.
  std::uint32_t order() const { return order_; }
  /// q^2 + q + 1, the order of mu and of the norm-one subgroup.
  std::uint32_t plane_order() const { return q_ * q_ + q_ + 1; }
  OmegaSign omega_sign() const { return sign_; }
  /// Monic defining polynomial, coefficients c_0..c_{3h}.
  const std::vector<std::uint32_t>& polynomial() const { return poly_; }

  Element zero() const { return {0}; }
  Element one() const { return {1}; }
  Element alpha() const { return exp(1); }
  Element mu() const { return exp(q_ - 1); }
  /// Generator of F*: alpha^(∓(q^2+q+1)) depending on the configured sign.
  Element omega() const { return exp(omega_log()); }
  std::uint32_t omega_log() const {
    return sign_ == OmegaSign::minus ? order_ - plane_order() : plane_order();
  }
  /// The prime-field element c mod p.
  Element from_int(std::int64_t c) const {
    return {static_cast<std::uint32_t>(detail::mod(c, p_))};
  }

  std::uint32_t log(Element x) const { return log_[x.index]; }
  Element exp(std::int64_t k) const {
    return {exp_[static_cast<std::size_t>(detail::mod(k, order_))]};
  }
  /// exp without reduction, valid for 0 <= k < 2*order.
  Element exp_unreduced(std::uint32_t k) const { return {exp_[k]}; }

  Element add(Element a, Element b) const {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const std::uint32_t la = log_[a.index];
    std::uint32_t d = log_[b.index] + order_ - la;
    if (d >= order_) d -= order_;
    const std::uint32_t z = zech_[d];
    if (z == kNoLog) return zero();
    return {exp_[la + z]};
  }
  Element neg(Element a) const {
    if (a.is_zero()) return a;
    return {exp_[log_[a.index] + neg_one_log()]};
  }
  Element sub(Element a, Element b) const { return add(a, neg(b)); }
  Element mul(Element a, Element b) const {
    if (a.is_zero() || b.is_zero()) return zero();
    return {exp_[log_[a.index] + log_[b.index]]};
  }
  Element inv(Element a) const {
    if (a.is_zero()) throw Error(ErrorCode::IdentityViolation, "inverse of zero");
    return {exp_[order_ - log_[a.index]]};
  }
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, std::int64_t e) const {
    if (a.is_zero()) return e == 0 ? one() : zero();
    const auto k = static_cast<std::int64_t>(log_[a.index]);
    const std::int64_t r = detail::mod(detail::mod(e, order_) * k, order_);
    return {exp_[static_cast<std::size_t>(r)]};
  }
  Element square(Element a) const { return mul(a, a); }

  /// x^(q^k).
  Element frobenius(Element x, std::int64_t k = 1) const {
    if (x.is_zero()) return x;
    std::uint64_t qk = 1;
    for (std::int64_t i = 0; i < detail::mod(k, 3); ++i) qk = qk * q_ % order_;
    return {exp_[log_[x.index] * qk % order_]};
  }

  /// Relative trace E -> F.
  Element trace(Element x) const { return {trace_[x.index]}; }
  /// Relative norm E -> F.
  Element norm(Element x) const {
    if (x.is_zero()) return x;
    return {exp_[(std::uint64_t{log_[x.index]} % (q_ - 1)) * plane_order()]};
  }
  /// Absolute trace E -> F_p, as an integer in [0, p).
  std::uint32_t absolute_trace(Element x) const { return abs_trace_[x.index]; }

  bool in_subfield(Element x) const { return x.is_zero() || log_[x.index] % plane_order() == 0; }
  bool is_square(Element x) const { return !x.is_zero() && log_[x.index] % 2 == 0; }
  /// Quadratic character of E (restricts to that of F since q^2+q+1 is odd).
  int chi2(Element x) const {
    if (x.is_zero()) return 0;
    return (log_[x.index] % 2 == 0) ? 1 : -1;
  }

  /// Discrete log base omega of a nonzero subfield element, in [0, q-1).
  std::uint32_t subfield_log(Element x) const {
    if (x.is_zero() || !in_subfield(x)) throw Error(ErrorCode::IdentityViolation, "subfield_log outside F*");
    const std::int64_t m = log_[x.index] / plane_order();
    const std::int64_t e = sign_ == OmegaSign::minus ? -m : m;
    return static_cast<std::uint32_t>(detail::mod(e, q_ - 1));
  }

  /// Absolute trace F -> F_p (sum of x^(p^k), k < h), for x in F.
  std::uint32_t subfield_absolute_trace(Element x) const {
    if (x.is_zero()) return 0;
    Element acc{0};
    std::uint64_t l = log_[x.index];
    for (std::uint32_t i = 0; i < h_; ++i) {
      acc = add(acc, Element{exp_[l]});
      l = l * p_ % order_;
    }
    if (acc.index >= p_) throw Error(ErrorCode::IdentityViolation, "absolute trace left the prime field");
    return acc.index;
  }

  /// Trace of alpha^k for 0 <= k < 2*order, without reduction.
  Element trace_of_log(std::uint32_t k) const { return {trace_[exp_[k]]}; }
  std::uint32_t neg_one_log() const { return order_ / 2; }

  /// Base-p coefficient digits of an element, lowest first.
  std::vector<std::uint32_t> digits(Element x) const {
    std::vector<std::uint32_t> d(degree_);
    std::uint32_t v = x.index;
    for (auto& c : d) {
      c = v % p_;
      v /= p_;
    }
    return d;
  }

  /// Coefficient-wise addition straight from the index encoding; used to
  /// build the Zech table and available as an independent cross-check.
  Element add_by_digits(Element a, Element b) const {
    std::uint32_t x = a.index, y = b.index, out = 0, place = 1;
    for (std::uint32_t i = 0; i < degree_; ++i) {
      out += ((x % p_ + y % p_) % p_) * place;
      x /= p_;
      y /= p_;
      place *= p_;
    }
    return {out};
  }

 private:
  void find_polynomial() {
    const std::uint64_t group_order = order_;
    const auto factors = detail::prime_factors(group_order);
    const std::uint64_t candidates = size_;  // choices for c_0..c_{n-1}
    for (std::uint64_t v = 1; v < candidates; ++v) {
      detail::Poly f(degree_ + 1, 0);
      std::uint64_t rest = v;
      for (std::uint32_t i = 0; i < degree_; ++i) {
        f[i] = static_cast<std::uint32_t>(rest % p_);
        rest /= p_;
      }
      f[degree_] = 1;
      if (detail::is_primitive(f, p_, group_order, factors)) {
        poly_ = std::move(f);
        return;
      }
    }
    throw Error(ErrorCode::NoPrimitivePoly, "no primitive polynomial of degree " + std::to_string(degree_));
  }

  void build_tables() {
    const std::uint32_t n = degree_;
    exp_.assign(2 * std::size_t{order_}, 0);
    log_.assign(size_, kNoLog);
    std::vector<std::uint32_t> coeff(n, 0);
    coeff[0] = 1;
    std::vector<std::uint32_t> place(n, 1);
    for (std::uint32_t i = 1; i < n; ++i) place[i] = place[i - 1] * p_;
    for (std::uint32_t k = 0; k < order_; ++k) {
      std::uint32_t idx = 0;
      for (std::uint32_t i = 0; i < n; ++i) idx += coeff[i] * place[i];
      if (log_[idx] != kNoLog) throw Error(ErrorCode::NoPrimitivePoly, "alpha is not primitive");
      exp_[k] = idx;
      exp_[k + order_] = idx;
      log_[idx] = k;
      // multiply by x and reduce with x^n = -(c_0 + ... + c_{n-1} x^{n-1})
      const std::uint32_t top = coeff[n - 1];
      for (std::uint32_t i = n - 1; i > 0; --i) coeff[i] = coeff[i - 1];
      coeff[0] = 0;
      if (top != 0)
        for (std::uint32_t i = 0; i < n; ++i) coeff[i] = (coeff[i] + (p_ - poly_[i]) * top) % p_;
    }
    zech_.assign(order_, kNoLog);
    for (std::uint32_t k = 0; k < order_; ++k) {
      const Element s = add_by_digits(one(), {exp_[k]});
      zech_[k] = s.is_zero() ? kNoLog : log_[s.index];
    }
    trace_.assign(size_, 0);
    const std::uint64_t q2 = std::uint64_t{q_} * q_ % order_;
    for (std::uint32_t idx = 1; idx < size_; ++idx) {
      const std::uint64_t l = log_[idx];
      const Element x{idx};
      const Element xq{exp_[l * q_ % order_]};
      const Element xq2{exp_[l * q2 % order_]};
      trace_[idx] = add(add(x, xq), xq2).index;
    }
    abs_trace_.assign(size_, 0);
    for (std::uint32_t idx = 1; idx < size_; ++idx) {
      Element acc{0};
      std::uint64_t l = log_[idx];
      for (std::uint32_t i = 0; i < n; ++i) {
        acc = add(acc, Element{exp_[l]});
        l = l * p_ % order_;
      }
      if (acc.index >= p_) throw Error(ErrorCode::IdentityViolation, "absolute trace left the prime field");
      abs_trace_[idx] = static_cast<std::uint16_t>(acc.index);
    }
  }

  std::uint32_t p_ = 0, h_ = 0, q_ = 0, degree_ = 0, size_ = 0, order_ = 0;
  OmegaSign sign_ = OmegaSign::minus;
  std::vector<std::uint32_t> poly_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> zech_;
  std::vector<std::uint32_t> trace_;
  std::vector<std::uint16_t> abs_trace_;
};

/// Compact view of the subfield F: element codes 0..q-1 ordered by index
/// (so 0 and 1 keep their codes), with full operation tables.
class Subfield {
 public:
  using Code = std::uint16_t;

  explicit Subfield(const FieldTower& tower) : q_(tower.q()) {
    code_of_.assign(tower.size(), kNotInF);
    for (std::uint32_t idx = 0; idx < tower.size(); ++idx) {
      if (!tower.in_subfield(Element{idx})) continue;
      code_of_[idx] = static_cast<Code>(elements_.size());
      elements_.push_back(Element{idx});
    }
    if (elements_.size() != q_) throw Error(ErrorCode::IdentityViolation, "subfield has wrong size");
    add_.resize(std::size_t{q_} * q_);
    mul_.resize(std::size_t{q_} * q_);
    for (Code a = 0; a < q_; ++a)
      for (Code b = 0; b < q_; ++b) {
        add_[a * q_ + b] = code(tower.add(elements_[a], elements_[b]));
        mul_[a * q_ + b] = code(tower.mul(elements_[a], elements_[b]));
      }
    neg_.resize(q_);
    inv_.resize(q_);
    for (Code a = 0; a < q_; ++a) {
      neg_[a] = code(tower.neg(elements_[a]));
      inv_[a] = a == 0 ? 0 : code(tower.inv(elements_[a]));
    }
    squares_.assign(q_, false);
    for (Code a = 1; a < q_; ++a) squares_[mul(a, a)] = true;
  }

  std::uint32_t size() const { return q_; }
  Code code(Element x) const {
    const Code c = code_of_[x.index];
    if (c == kNotInF) throw Error(ErrorCode::IdentityViolation, "element is not in the subfield");
    return c;
  }
  bool contains(Element x) const { return code_of_[x.index] != kNotInF; }
  Element element(Code c) const { return elements_[c]; }

  Code add(Code a, Code b) const { return add_[a * q_ + b]; }
  Code sub(Code a, Code b) const { return add_[a * q_ + neg_[b]]; }
  Code mul(Code a, Code b) const { return mul_[a * q_ + b]; }
  Code neg(Code a) const { return neg_[a]; }
  Code inv(Code a) const {
    if (a == 0) throw Error(ErrorCode::IdentityViolation, "inverse of zero");
    return inv_[a];
  }
  Code div(Code a, Code b) const { return mul(a, inv(b)); }
  /// Nonzero square test.
  bool is_square(Code a) const { return squares_[a]; }

 private:
  static constexpr Code kNotInF = std::numeric_limits<Code>::max();
  std::uint32_t q_;
  std::vector<Code> code_of_;
  std::vector<Element> elements_;
  std::vector<Code> add_, mul_, neg_, inv_;
  std::vector<bool> squares_;
};

/// Coordinates of E over F in the power basis {1, alpha, alpha^2}, computed
/// through the trace-dual basis: c_i(x) = T(x d_i).
class SubfieldBasis {
 public:
  explicit SubfieldBasis(const FieldTower& tower) : tower_(&tower) {
    basis_ = {tower.one(), tower.alpha(), tower.pow(tower.alpha(), 2)};
    std::array<std::array<Element, 3>, 3> gram{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) gram[i][j] = tower.trace(tower.mul(basis_[i], basis_[j]));
    const auto inv = invert3(tower, gram);
    for (int i = 0; i < 3; ++i) {
      Element d{0};
      for (int j = 0; j < 3; ++j) d = tower.add(d, tower.mul(inv[i][j], basis_[j]));
      dual_[i] = d;
    }
  }

  const std::array<Element, 3>& basis() const { return basis_; }
  const std::array<Element, 3>& dual() const { return dual_; }

  std::array<Element, 3> coordinates(Element x) const {
    return {tower_->trace(tower_->mul(x, dual_[0])), tower_->trace(tower_->mul(x, dual_[1])),
            tower_->trace(tower_->mul(x, dual_[2]))};
  }
  Element combine(const std::array<Element, 3>& c) const {
    Element out{0};
    for (int i = 0; i < 3; ++i) out = tower_->add(out, tower_->mul(c[i], basis_[i]));
    return out;
  }

  static Element det3(const FieldTower& t, const std::array<std::array<Element, 3>, 3>& m) {
    auto term = [&](int a, int b, int c) {
      return t.mul(m[0][a], t.sub(t.mul(m[1][b], m[2][c]), t.mul(m[1][c], m[2][b])));
    };
    return t.add(t.sub(term(0, 1, 2), term(1, 0, 2)), term(2, 0, 1));
  }

  static std::array<std::array<Element, 3>, 3> invert3(const FieldTower& t,
                                                       const std::array<std::array<Element, 3>, 3>& m) {
    const Element det = det3(t, m);
    if (det.is_zero()) throw Error(ErrorCode::ModelViolation, "singular 3x3 matrix");
    const Element inv_det = t.inv(det);
    std::array<std::array<Element, 3>, 3> out{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        // cofactor of m[j][i]
        const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        const Element cof = t.sub(t.mul(m[r0][c0], m[r1][c1]), t.mul(m[r0][c1], m[r1][c0]));
        out[i][j] = t.mul(cof, inv_det);
      }
    return out;
  }

 private:
  const FieldTower* tower_;
  std::array<Element, 3> basis_{};
  std::array<Element, 3> dual_{};
};

}  // namespace clq
