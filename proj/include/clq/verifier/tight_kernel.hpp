#pragma once

// |p^perp n T| for every quadric point p.
//
// Generic kernel: iterate T, test collinearity through log tables.
// Orbit kernel: when T is a union of <c>-orbits off the generators, each orbit
// is (mu^j, mu^-j w), j < Q, and p = (u1, v1) is collinear with the j-th point
// iff T(v1 mu^j) = -T(u1 w mu^-j). Both sides are strided reads from two
// small tables of trace codes, so the count is a byte-equality count.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#if defined(__SSE2__)
#include <emmintrin.h>
#endif

#include "clq/field_tower.hpp"
#include "clq/klein_quadric.hpp"
#include "clq/parallel.hpp"
#include "clq/report.hpp"

namespace clq {

namespace detail {

inline std::size_t count_equal_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += a[i] == b[i];
  return c;
}

inline std::size_t count_equal(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
#if defined(__SSE2__)
  std::size_t total = 0, i = 0;
  const __m128i zero = _mm_setzero_si128();
  while (i + 16 <= n) {
    __m128i acc = _mm_setzero_si128();
    // byte lanes overflow after 255 rounds
    const std::size_t rounds = std::min<std::size_t>(255, (n - i) / 16);
    for (std::size_t r = 0; r < rounds; ++r, i += 16) {
      const __m128i x = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i));
      const __m128i y = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i));
      acc = _mm_sub_epi8(acc, _mm_cmpeq_epi8(x, y));
    }
    const __m128i s = _mm_sad_epu8(acc, zero);
    total += static_cast<std::size_t>(_mm_cvtsi128_si32(s)) + static_cast<std::size_t>(_mm_extract_epi16(s, 4));
  }
  return total + count_equal_scalar(a + i, b + i, n - i);
#else
  return count_equal_scalar(a, b, n);
#endif
}

}  // namespace detail

/// <c>-orbit representatives (1, w) of T, when T is <c>-closed and misses
/// pi1 u pi2.
inline std::optional<std::vector<Element>> c_orbit_representatives(const Quadric& Qd,
                                                                   const std::vector<std::uint32_t>& T) {
  std::vector<char> in(Qd.size(), 0);
  for (auto i : T) in[i] = 1;
  std::vector<Element> reps;
  for (auto i : T) {
    if (Qd.in_pi1(i) || Qd.in_pi2(i)) return std::nullopt;
    if (Qd.point(i).u == Qd.tower().one()) reps.push_back(Qd.point(i).v);
  }
  if (reps.size() * Qd.plane_order() != T.size()) return std::nullopt;
  const Permutation c = Qd.permutation(IsometryMap::c());
  for (auto i : T)
    if (!in[c[i]]) return std::nullopt;
  return reps;
}

class OrbitKernel {
 public:
  OrbitKernel(const Quadric& Qd, std::vector<Element> reps) : Qd_(&Qd), reps_(std::move(reps)) {
    const FieldTower& t = Qd.tower();
    if (t.q() > 255) throw Error(ErrorCode::ResourceCap, "trace codes exceed one byte");
    const Subfield F(t);
    Q_ = t.plane_order();
    step_ = t.q() - 1;
    fwd_.assign(std::size_t{step_} * 2 * Q_, 0);
    rev_.assign(std::size_t{step_} * 2 * Q_, 0);
    for (std::uint32_t r = 0; r < step_; ++r)
      for (std::uint32_t k = 0; k < 2 * Q_; ++k) {
        const std::uint32_t a = r + (k % Q_) * step_;
        const std::uint32_t b = r + ((Q_ - 1 + 2 * Q_ - k) % Q_) * step_;
        fwd_[r * 2 * Q_ + k] = static_cast<std::uint8_t>(F.code(t.trace_of_log(a)));
        rev_[r * 2 * Q_ + k] = static_cast<std::uint8_t>(F.code(t.neg(t.trace_of_log(b))));
      }
    zeros_.assign(Q_, 0);
    rep_logs_.reserve(reps_.size());
    for (Element w : reps_) rep_logs_.push_back(t.log(w));
  }

  std::uint32_t count(std::uint32_t p) const {
    const std::uint32_t lu = Qd_->log_u(p), lv = Qd_->log_v(p);
    const std::uint32_t M = Qd_->tower().order();
    const std::uint8_t* a = zeros_.data();
    if (lv != Quadric::kNoLog) a = &fwd_[(lv % step_) * 2 * Q_ + lv / step_];
    std::uint32_t total = 0;
    for (std::uint32_t lw : rep_logs_) {
      const std::uint8_t* b = zeros_.data();
      if (lu != Quadric::kNoLog) {
        std::uint32_t t = lu + lw;
        if (t >= M) t -= M;
        b = &rev_[(t % step_) * 2 * Q_ + (Q_ - 1 - t / step_)];
      }
      total += static_cast<std::uint32_t>(detail::count_equal(a, b, Q_));
    }
    return total;
  }

 private:
  const Quadric* Qd_;
  std::vector<Element> reps_;
  std::vector<std::uint32_t> rep_logs_;
  std::uint32_t Q_ = 0, step_ = 0;
  std::vector<std::uint8_t> fwd_, rev_, zeros_;
};

enum class KernelChoice { automatic, generic, orbit };

inline std::vector<std::uint32_t> collinear_counts_generic(const Quadric& Qd, const std::vector<std::uint32_t>& T,
                                                           unsigned threads = 1) {
  std::vector<std::uint32_t> out(Qd.size(), 0);
  parallel_chunks(Qd.size(), threads, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t p = b; p < e; ++p) {
      std::uint32_t c = 0;
      for (auto j : T) c += Qd.collinear(static_cast<std::uint32_t>(p), j);
      out[p] = c;
    }
  });
  return out;
}

/// |p^perp n T| for every p (p^perp contains p). Returns the kernel used.
inline std::vector<std::uint32_t> collinear_counts(const Quadric& Qd, const std::vector<std::uint32_t>& T,
                                                   unsigned threads, KernelChoice choice, std::string* used = nullptr) {
  if (choice != KernelChoice::generic && Qd.tower().q() <= 255) {
    if (auto reps = c_orbit_representatives(Qd, T)) {
      const OrbitKernel k(Qd, std::move(*reps));
      std::vector<std::uint32_t> out(Qd.size());
      parallel_chunks(Qd.size(), threads, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t p = b; p < e; ++p) out[p] = k.count(static_cast<std::uint32_t>(p));
      });
      if (used) *used = "c-orbit";
      return out;
    }
  }
  if (choice == KernelChoice::orbit) throw Error(ErrorCode::BadFlag, "set is not a union of <c>-orbits off the generators");
  if (used) *used = "pairwise";
  return collinear_counts_generic(Qd, T, threads);
}

inline std::vector<char> membership(std::size_t n, const std::vector<std::uint32_t>& T) {
  std::vector<char> in(n, 0);
  for (auto i : T) in[i] = 1;
  return in;
}

/// |p^perp n T| = x(q+1) + q^2 [p in T] for every quadric point p.
inline CheckReport verify_tight_set(const Quadric& Qd, const std::vector<std::uint32_t>& T, std::uint64_t x,
                                    unsigned threads = 1, KernelChoice choice = KernelChoice::automatic,
                                    std::string name = "tight_set") {
  Stopwatch sw;
  CheckReport r(std::move(name), Qd.size());
  const std::uint64_t q = Qd.tower().q();
  std::string kernel;
  const auto counts = collinear_counts(Qd, T, threads, choice, &kernel);
  const auto in = membership(Qd.size(), T);
  std::uint64_t off_min = ~0ull, off_max = 0, on_min = ~0ull, on_max = 0;
  for (std::uint32_t p = 0; p < Qd.size(); ++p) {
    const std::uint64_t want = x * (q + 1) + q * q * static_cast<std::uint64_t>(in[p]);
    r.expect(counts[p] == want, [&] {
      return "point " + std::to_string(p) + (in[p] ? " (in T)" : "") + ": " + std::to_string(counts[p]) + " != " +
             std::to_string(want);
    });
    auto& lo = in[p] ? on_min : off_min;
    auto& hi = in[p] ? on_max : off_max;
    lo = std::min<std::uint64_t>(lo, counts[p]);
    hi = std::max<std::uint64_t>(hi, counts[p]);
  }
  r.domain_size = Qd.size();
  r.details["x"] = x;
  r.details["set_size"] = T.size();
  r.details["kernel"] = kernel;
  if (off_min != ~0ull) r.details["off_count"] = {off_min, off_max};
  if (on_min != ~0ull) r.details["on_count"] = {on_min, on_max};
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

/// Integer forms of the two eigenvector criteria, from pairwise counts:
///   (q^2+1)(cA)_p - x q(q+1)^2 = (q^2-1)((q^2+1)c_p - x)
///   off the generators, ((q^2-1)c' - x j')A' = (q^2-1)((q^2-1)c' - x j').
/// A is the collinearity matrix without its diagonal.
inline std::vector<CheckReport> verify_eigenvector_criteria(const Quadric& Qd, const std::vector<std::uint32_t>& T,
                                                            std::uint64_t x, unsigned threads = 1) {
  const std::int64_t q = Qd.tower().q();
  const std::int64_t X = static_cast<std::int64_t>(x);
  const auto counts = collinear_counts_generic(Qd, T, threads);
  const auto in = membership(Qd.size(), T);
  std::vector<CheckReport> out;
  {
    CheckReport r("eigenvector_full", Qd.size());
    for (std::uint32_t p = 0; p < Qd.size(); ++p) {
      const std::int64_t cA = static_cast<std::int64_t>(counts[p]) - in[p];
      const std::int64_t lhs = (q * q + 1) * cA - X * q * (q + 1) * (q + 1);
      const std::int64_t rhs = (q * q - 1) * ((q * q + 1) * in[p] - X);
      r.expect(lhs == rhs, [&] { return "point " + std::to_string(p) + ": " + std::to_string(lhs) + " != " + std::to_string(rhs); });
    }
    out.push_back(r);
  }
  {
    CheckReport r("eigenvector_restricted");
    std::vector<std::uint32_t> gens;
    for (std::uint32_t p = 0; p < Qd.size(); ++p)
      if (Qd.in_pi1(p) || Qd.in_pi2(p)) gens.push_back(p);
    const auto gcount = collinear_counts_generic(Qd, gens, threads);
    bool disjoint = true;
    for (auto i : T) disjoint = disjoint && !Qd.in_pi1(i) && !Qd.in_pi2(i);
    r.expect(disjoint, [] { return "set meets pi1 u pi2"; });
    std::uint64_t n = 0;
    for (std::uint32_t p = 0; p < Qd.size(); ++p) {
      if (Qd.in_pi1(p) || Qd.in_pi2(p)) continue;
      ++n;
      const std::int64_t cA = static_cast<std::int64_t>(counts[p]) - in[p];
      const std::int64_t jA = q * (q + 1) * (q + 1) - static_cast<std::int64_t>(gcount[p]);
      const std::int64_t lhs = (q * q - 1) * cA - X * jA;
      const std::int64_t rhs = (q * q - 1) * ((q * q - 1) * in[p] - X);
      r.expect(lhs == rhs, [&] { return "point " + std::to_string(p) + ": " + std::to_string(lhs) + " != " + std::to_string(rhs); });
    }
    r.domain_size = n;
    out.push_back(r);
  }
  return out;
}

}  // namespace clq
