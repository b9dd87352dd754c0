#pragma once

// Multiplicative characters of E and F, Gauss sums, the Fourier transform on
// E*, and the kappa counting functions. Character values are kept as exact
// exponents of a root of unity; only Gauss sums go through complex doubles.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "clq/field_identities.hpp"
#include "clq/field_tower.hpp"
#include "clq/parallel.hpp"
#include "clq/report.hpp"

namespace clq {

using Complex = std::complex<double>;

/// chi(g^n) = exp(2 pi i n m / modulus) for the field's fixed generator g
/// (alpha for E, omega for F).
struct Character {
  std::uint64_t modulus = 1;
  std::uint64_t m = 0;

  bool trivial() const { return m % modulus == 0; }
  std::uint64_t order() const { return modulus / std::gcd(m % modulus, modulus); }
  Character conj() const { return {modulus, (modulus - m % modulus) % modulus}; }
  Character operator*(const Character& o) const { return {modulus, (m + o.m) % modulus}; }
  Character pow(std::uint64_t k) const { return {modulus, (m % modulus) * (k % modulus) % modulus}; }
  friend bool operator==(const Character&, const Character&) = default;
};

/// i^k with k mod 4.
struct UnitRoot4 {
  std::uint8_t k = 0;
  UnitRoot4 operator*(UnitRoot4 o) const { return {static_cast<std::uint8_t>((k + o.k) & 3)}; }
  UnitRoot4 conj() const { return {static_cast<std::uint8_t>((4 - k) & 3)}; }
  friend bool operator==(UnitRoot4, UnitRoot4) = default;
};

/// Exponent e such that chi(x) = exp(2 pi i e / modulus); nullopt encodes a
/// zero value. The trivial character takes the value 1 at 0.
inline std::optional<std::uint64_t> evaluate_exponent(const Character& chi, std::uint64_t log_x, bool x_is_zero) {
  if (x_is_zero) {
    if (chi.trivial()) return 0;
    return std::nullopt;
  }
  return (log_x % chi.modulus) * (chi.m % chi.modulus) % chi.modulus;
}

inline Character e_character(const FieldTower& t, std::uint64_t m) { return {t.order(), m % t.order()}; }
inline Character quadratic_character(const FieldTower& t) { return e_character(t, t.order() / 2); }
inline Character quartic_character(const FieldTower& t) { return e_character(t, t.order() / 4); }

/// chi_4 on E: nullopt at 0, i^(log x) otherwise.
inline std::optional<UnitRoot4> chi4(const FieldTower& t, Element x) {
  if (x.is_zero()) return std::nullopt;
  return UnitRoot4{static_cast<std::uint8_t>(t.log(x) & 3)};
}

inline Complex unit_root(std::uint64_t num, std::uint64_t den) {
  const double a = 2.0 * std::numbers::pi * static_cast<double>(num % den) / static_cast<double>(den);
  return {std::cos(a), std::sin(a)};
}

inline Complex evaluate(const Character& chi, std::uint64_t log_x, bool x_is_zero) {
  const auto e = evaluate_exponent(chi, log_x, x_is_zero);
  return e ? unit_root(*e, chi.modulus) : Complex{0.0, 0.0};
}

/// Kahan-compensated complex accumulator.
class ComplexSum {
 public:
  void add(Complex z) {
    add_part(re_, cre_, z.real());
    add_part(im_, cim_, z.imag());
  }
  Complex value() const { return {re_, im_}; }

 private:
  static void add_part(double& s, double& c, double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

struct GaussValue {
  Complex value;
  double error_bound = 0;
};

/// Precomputed (log, absolute trace) data for the multiplicative group of
/// either E or F, used to evaluate character sums.
class CharacterDomain {
 public:
  enum class Field { E, F };

  static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 20;

  CharacterDomain(const FieldTower& t, Field which) : p_(t.p()) {
    if (which == Field::E) {
      if (t.size() > kMaxSize) throw Error(ErrorCode::FieldTooLarge, "E too large for character sums");
      modulus_ = t.order();
      r_ = t.degree();
      traces_.resize(modulus_);
      for (std::uint64_t k = 0; k < modulus_; ++k) traces_[k] = t.absolute_trace(t.exp(static_cast<std::int64_t>(k)));
    } else {
      modulus_ = t.q() - 1;
      r_ = t.h();
      traces_.resize(modulus_);
      const Element w = t.omega();
      for (std::uint64_t k = 0; k < modulus_; ++k)
        traces_[k] = t.subfield_absolute_trace(t.pow(w, static_cast<std::int64_t>(k)));
    }
    zeta_p_.resize(p_);
    for (std::uint32_t a = 0; a < p_; ++a) zeta_p_[a] = unit_root(a, p_);
    roots_.resize(modulus_);
    for (std::uint64_t k = 0; k < modulus_; ++k) roots_[k] = unit_root(k, modulus_);
  }

  std::uint64_t modulus() const { return modulus_; }
  std::uint32_t p() const { return p_; }
  std::uint32_t r() const { return r_; }
  double field_size() const { return std::pow(static_cast<double>(p_), static_cast<double>(r_)); }
  Character character(std::uint64_t m) const { return {modulus_, m % modulus_}; }

  /// G_r(chi) = sum_x chi(x) zeta^(Tr x), including chi(0) = 1 for trivial chi.
  GaussValue gauss_sum(const Character& chi) const {
    ComplexSum s;
    if (chi.trivial()) s.add(Complex{1.0, 0.0});
    const std::uint64_t m = chi.m % modulus_;
    std::uint64_t e = 0;
    for (std::uint64_t k = 0; k < modulus_; ++k) {
      s.add(roots_[e] * zeta_p_[traces_[k]]);
      e += m;
      if (e >= modulus_) e -= modulus_;
    }
    return {s.value(), 4.0 * field_size() * std::numeric_limits<double>::epsilon()};
  }

  /// f_hat(chi_m) = sum_{k} f(g^k) conj(chi_m(g^k)) for all m.
  std::vector<Complex> fourier(const std::vector<Complex>& f) const {
    if (f.size() != modulus_) throw Error(ErrorCode::SizeMismatch, "fourier input has wrong length");
    std::vector<Complex> out(modulus_);
    for (std::uint64_t m = 0; m < modulus_; ++m) {
      ComplexSum s;
      std::uint64_t e = 0;
      for (std::uint64_t k = 0; k < modulus_; ++k) {
        s.add(f[k] * std::conj(roots_[e]));
        e += m;
        if (e >= modulus_) e -= modulus_;
      }
      out[m] = s.value();
    }
    return out;
  }

  std::vector<Complex> inverse_fourier(const std::vector<Complex>& fhat) const {
    if (fhat.size() != modulus_) throw Error(ErrorCode::SizeMismatch, "fourier input has wrong length");
    std::vector<Complex> out(modulus_);
    for (std::uint64_t k = 0; k < modulus_; ++k) {
      ComplexSum s;
      std::uint64_t e = 0;
      for (std::uint64_t m = 0; m < modulus_; ++m) {
        s.add(fhat[m] * roots_[e]);
        e += k;
        if (e >= modulus_) e -= modulus_;
      }
      out[k] = s.value() / static_cast<double>(modulus_);
    }
    return out;
  }

 private:
  std::uint32_t p_;
  std::uint32_t r_ = 0;
  std::uint64_t modulus_ = 1;
  std::vector<std::uint32_t> traces_;
  std::vector<Complex> zeta_p_;
  std::vector<Complex> roots_;
};

/// Closed form for G_r(chi_2), p odd.
inline Complex quadratic_gauss_closed_form(std::uint32_t p, std::uint32_t r) {
  const double root = std::pow(static_cast<double>(p), r / 2.0);
  const double sign = (r % 2 == 1) ? 1.0 : -1.0;  // (-1)^(r-1)
  if (p % 4 == 1) return {sign * root, 0.0};
  static constexpr std::array<Complex, 4> ipow{Complex{1, 0}, Complex{0, 1}, Complex{-1, 0}, Complex{0, -1}};
  return sign * root * ipow[r % 4];
}

struct KappaProfile {
  Element x;
  /// counts[k] = kappa_{i^k}(x).
  std::array<std::uint32_t, 4> counts{};
  std::uint32_t zero_pairs = 0;

  std::uint32_t total() const { return counts[0] + counts[1] + counts[2] + counts[3] + zero_pairs; }
};

/// Counts i in [0, q^2+q+1) by the value chi4(T(mu^i x)) conj(chi4(T(mu^-i x))).
inline KappaProfile kappa_profile(const FieldTower& t, Element x) {
  if (x.is_zero()) throw Error(ErrorCode::IdentityViolation, "kappa_profile at 0");
  KappaProfile prof;
  prof.x = x;
  const std::uint32_t Q = t.plane_order();
  const std::uint32_t M = t.order();
  const std::uint32_t step = t.q() - 1;
  const std::uint32_t lx = t.log(x);
  std::uint32_t up = lx, down = lx;
  for (std::uint32_t i = 0; i < Q; ++i) {
    const Element t1 = t.trace_of_log(up), t2 = t.trace_of_log(down);
    if (t1.is_zero() || t2.is_zero()) {
      ++prof.zero_pairs;
    } else {
      ++prof.counts[(t.log(t1) + 4 - (t.log(t2) & 3)) & 3];
    }
    up += step;
    if (up >= M) up -= M;
    down = down >= step ? down - step : down + M - step;
  }
  return prof;
}

/// kappa_1 - kappa_{-1} = q chi2(x) chi2(T(x)) for every x in E*, together
/// with the partition and symmetry properties of the profile.
inline std::vector<CheckReport> verify_kappa_theorem(const FieldTower& t, unsigned threads = 1) {
  require_admissible(t);
  const std::uint32_t M = t.order();
  const auto q = static_cast<std::int64_t>(t.q());
  const std::size_t chunks = chunk_count(M, threads);
  std::vector<std::array<CheckReport, 4>> parts(chunks);
  parallel_chunks(M, threads, [&](std::size_t b, std::size_t e, std::size_t c) {
    auto& [thm, sym, part, scale] = parts[c];
    for (std::size_t k = b; k < e; ++k) {
      const Element x = t.exp(static_cast<std::int64_t>(k));
      const auto prof = kappa_profile(t, x);
      const std::int64_t lhs = std::int64_t{prof.counts[0]} - prof.counts[2];
      const std::int64_t rhs = q * t.chi2(x) * t.chi2(t.trace(x));
      thm.expect(lhs == rhs, [&] {
        return "x=alpha^" + std::to_string(k) + " lhs=" + std::to_string(lhs) + " rhs=" + std::to_string(rhs);
      });
      sym.expect(prof.counts[1] == prof.counts[3], [&] { return "x=alpha^" + std::to_string(k); });
      part.expect(prof.total() == t.plane_order(), [&] { return "x=alpha^" + std::to_string(k); });
      // kappa_z(lambda x) = kappa_z(x) for lambda = omega
      const auto scaled = kappa_profile(t, t.mul(t.omega(), x));
      scale.expect(scaled.counts == prof.counts, [&] { return "x=alpha^" + std::to_string(k); });
    }
  });
  std::array<CheckReport, 4> out{CheckReport("kappa1minus", M), CheckReport("kappa_i_equals_kappa_minus_i", M),
                                 CheckReport("kappa_partition", M), CheckReport("kappa_scale_invariant", M)};
  for (auto& part : parts)
    for (int i = 0; i < 4; ++i) out[i].merge(part[i]);
  return {out.begin(), out.end()};
}

struct GaussSuiteOptions {
  /// Davenport-Hasse (d=2) is run over every admissible character when the
  /// character group has at most this many elements, else sampled.
  std::uint64_t full_dh_limit = 1000;
  std::uint64_t dh_samples = 200;
  std::uint64_t dh4_samples = 50;
  std::uint64_t seed = 1;
};

/// GSumProd, GSum2Eval, DavHasse (d = 2, plus a d = 4 sample) and GSumRatio,
/// all at absolute tolerance 1e-6 p^(3h/2).
inline std::vector<CheckReport> verify_gauss_identities(const FieldTower& t, GaussSuiteOptions opt = {}) {
  const CharacterDomain dE(t, CharacterDomain::Field::E);
  const CharacterDomain dF(t, CharacterDomain::Field::F);
  const std::uint64_t M = dE.modulus();
  const double tol = 1e-6 * std::pow(static_cast<double>(t.p()), 1.5 * t.h());

  std::vector<GaussValue> gE(M);
  for (std::uint64_t m = 0; m < M; ++m) gE[m] = dE.gauss_sum(dE.character(m));

  auto fmt = [](Complex z) { return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")"; };
  std::vector<CheckReport> out;

  {
    CheckReport r("GSumProd");
    auto run = [&](const CharacterDomain& d, const std::vector<GaussValue>* cache, const char* tag) {
      for (std::uint64_t m = 1; m < d.modulus(); ++m) {
        const Character chi = d.character(m);
        const Complex g = cache ? (*cache)[m].value : d.gauss_sum(chi).value;
        const Complex gb = cache ? (*cache)[chi.conj().m].value : d.gauss_sum(chi.conj()).value;
        // chi(-1) = +-1 according to the parity of m * (modulus/2)
        const double chi_m1 = ((m * (d.modulus() / 2)) % d.modulus() == 0) ? 1.0 : -1.0;
        const Complex rhs = chi_m1 * d.field_size();
        r.expect(std::abs(g * gb - rhs) <= tol, [&] {
          return std::string(tag) + " m=" + std::to_string(m) + " lhs=" + fmt(g * gb) + " rhs=" + fmt(rhs);
        });
        r.expect(std::abs(std::abs(g) - std::sqrt(d.field_size())) <= tol,
                 [&] { return std::string(tag) + " |G| m=" + std::to_string(m); });
      }
    };
    run(dE, &gE, "E");
    run(dF, nullptr, "F");
    r.domain_size = r.checked;
    out.push_back(r);
  }
  {
    CheckReport r("GSum2Eval");
    for (const CharacterDomain* d : {&dF, &dE}) {
      const Complex g = d->gauss_sum(d->character(d->modulus() / 2)).value;
      const Complex want = quadratic_gauss_closed_form(d->p(), d->r());
      r.expect(std::abs(g - want) <= tol,
               [&] { return "r=" + std::to_string(d->r()) + " got " + fmt(g) + " want " + fmt(want); });
      r.details["r" + std::to_string(d->r())] = {g.real(), g.imag()};
    }
    r.domain_size = r.checked;
    out.push_back(r);
  }
  {
    // chi^2(2) G(chi) G(chi chi2) = G(chi^2) G(chi2)
    CheckReport r("DavHasse_d2");
    const Character chi2 = dE.character(M / 2);
    const std::uint64_t log2 = t.log(t.from_int(2));
    std::vector<std::uint64_t> ms;
    const bool full = M <= opt.full_dh_limit;
    if (full) {
      for (std::uint64_t m = 1; m < M; ++m) ms.push_back(m);
    } else {
      std::mt19937_64 rng(opt.seed);
      for (std::uint64_t k = 0; k < opt.dh_samples; ++k) ms.push_back(1 + rng() % (M - 1));
      r.scope = "sampled(seed=" + std::to_string(opt.seed) + ")";
    }
    for (auto m : ms) {
      const Character chi = dE.character(m);
      if ((chi * chi2).trivial()) continue;
      const Character sq = chi.pow(2);
      const Complex lhs = evaluate(sq, log2, false) * gE[m].value * gE[(chi * chi2).m].value;
      const Complex rhs = gE[sq.m].value * gE[chi2.m].value;
      r.expect(std::abs(lhs - rhs) <= tol, [&] { return "m=" + std::to_string(m); });
    }
    r.domain_size = full ? r.checked : M;
    out.push_back(r);
  }
  {
    // chi^4(4) G(chi) prod_i G(chi psi^i) = G(chi^4) prod_i G(psi^i), psi = chi4
    CheckReport r("DavHasse_d4");
    r.scope = "sampled(seed=" + std::to_string(opt.seed + 1) + ")";
    const Character psi = dE.character(M / 4);
    const std::uint64_t log4 = t.log(t.from_int(4));
    std::mt19937_64 rng(opt.seed + 1);
    for (std::uint64_t s = 0; s < opt.dh4_samples; ++s) {
      const Character chi = dE.character(1 + rng() % (M - 1));
      bool ok = true;
      for (std::uint64_t i = 1; i < 4; ++i) ok = ok && !(chi * psi.pow(i)).trivial();
      if (!ok) continue;
      Complex lhs = evaluate(chi.pow(4), log4, false) * gE[chi.m].value;
      Complex rhs = gE[chi.pow(4).m].value;
      for (std::uint64_t i = 1; i < 4; ++i) {
        lhs *= gE[(chi * psi.pow(i)).m].value;
        rhs *= gE[psi.pow(i).m].value;
      }
      const double tol4 = tol * std::pow(dE.field_size(), 1.5);
      r.expect(std::abs(lhs - rhs) <= tol4, [&] { return "m=" + std::to_string(chi.m); });
    }
    r.domain_size = M;
    out.push_back(r);
  }
  {
    // sum_x conj(chi)(T x) chi(x) = (q-1) G_3h(chi) / G_h(chi|F)
    CheckReport r("GSumRatio");
    std::vector<Element> Fstar;
    for (std::uint32_t i = 1; i < t.size(); ++i)
      if (t.in_subfield(Element{i})) Fstar.push_back(Element{i});
    std::vector<std::uint32_t> tr_log(M), f_abs(Fstar.size());
    std::vector<char> tr_zero(M);
    for (std::uint64_t k = 0; k < M; ++k) {
      const Element tx = t.trace(t.exp(static_cast<std::int64_t>(k)));
      tr_zero[k] = tx.is_zero();
      tr_log[k] = tx.is_zero() ? 0 : t.log(tx);
    }
    for (std::size_t i = 0; i < Fstar.size(); ++i) f_abs[i] = t.subfield_absolute_trace(Fstar[i]);
    for (std::uint64_t m = 1; m < M; ++m) {
      if (m % (t.q() - 1) == 0) continue;  // restriction to F is trivial
      const Character chi = dE.character(m);
      ComplexSum lhs;
      for (std::uint64_t k = 0; k < M; ++k) {
        if (tr_zero[k]) continue;
        const std::uint64_t e = (M - (tr_log[k] * m) % M + k * m) % M;
        lhs.add(unit_root(e, M));
      }
      ComplexSum gh;
      for (std::size_t i = 0; i < Fstar.size(); ++i)
        gh.add(evaluate(chi, t.log(Fstar[i]), false) * unit_root(f_abs[i], t.p()));
      const Complex rhs = static_cast<double>(t.q() - 1) * gE[m].value / gh.value();
      r.expect(std::abs(lhs.value() - rhs) <= tol,
               [&] { return "m=" + std::to_string(m) + " lhs=" + fmt(lhs.value()) + " rhs=" + fmt(rhs); });
    }
    r.domain_size = r.checked;
    out.push_back(r);
  }
  return out;
}

}  // namespace clq
