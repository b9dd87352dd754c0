#pragma once

// The sign partition of S, the orbit-sum matrices B_s and H, eigenvector
// lifting, and assembly of the tight sets T1, T2, T1', T2'.

#include <algorithm>
#include <array>
#include <cstdint>
#include <complex>
#include <string>
#include <vector>

#include "clq/character_engine.hpp"
#include "clq/error.hpp"
#include "clq/field_identities.hpp"
#include "clq/field_tower.hpp"
#include "clq/klein_quadric.hpp"
#include "clq/parallel.hpp"
#include "clq/report.hpp"
#include "clq/special_set.hpp"

namespace clq {

using IntMatrix = std::vector<std::vector<std::int64_t>>;
using IntVector = std::vector<std::int64_t>;

inline IntMatrix int_matrix(std::size_t n, std::size_t m, std::int64_t fill = 0) {
  return IntMatrix(n, IntVector(m, fill));
}

inline IntVector mat_vec(const IntMatrix& A, const IntVector& x) {
  IntVector out(A.size(), 0);
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) out[i] += A[i][j] * x[j];
  return out;
}

inline IntVector vec_mat(const IntVector& x, const IntMatrix& A) {
  IntVector out(A.empty() ? 0 : A[0].size(), 0);
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += x[i] * A[i][j];
  return out;
}

/// chi2(2 T(ab)) as -1, 0 or 1.
inline int sign_of_pair(const FieldTower& t, Element a, Element b) {
  return t.chi2(t.mul(t.from_int(2), t.trace(t.mul(a, b))));
}

struct SignPartition {
  std::size_t a1 = 0;
  std::vector<char> in_x1;
  std::vector<std::uint32_t> X1, X2;
};

inline SignPartition partition_from(const FieldTower& t, const SpecialSet& S, std::size_t a1) {
  if (a1 >= S.size()) throw Error(ErrorCode::BadFlag, "a1 index " + std::to_string(a1) + " out of range");
  SignPartition part;
  part.a1 = a1;
  part.in_x1.assign(S.size(), 0);
  for (std::size_t i = 0; i < S.size(); ++i) {
    part.in_x1[i] = sign_of_pair(t, S[a1], S[i]) != -1;
    (part.in_x1[i] ? part.X1 : part.X2).push_back(static_cast<std::uint32_t>(i));
  }
  return part;
}

/// Same part iff chi2(2T(ab)) != -1, checked over every pair.
inline CheckReport verify_sign_partition(const FieldTower& t, const SpecialSet& S, const SignPartition& part) {
  CheckReport r("sign_partition");
  const std::size_t n = S.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const int sg = sign_of_pair(t, S[i], S[j]);
      const bool same = part.in_x1[i] == part.in_x1[j];
      r.expect(sg != 0 && same == (sg != -1), [&] {
        return "witness (a1,a,b)=(" + std::to_string(part.a1) + "," + std::to_string(i) + "," + std::to_string(j) +
               ") sign " + std::to_string(sg);
      });
    }
  // Frobenius permutes S and each part
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = S.position(t.frobenius(S[i]));
    r.expect(k < n && part.in_x1[k] == part.in_x1[i], [&] { return "Frobenius moves " + std::to_string(i); });
  }
  // another base element fixes or swaps the parts
  for (std::size_t b = 0; b < n; ++b) {
    const SignPartition alt = partition_from(t, S, b);
    const bool same = alt.in_x1 == part.in_x1;
    bool swapped = true;
    for (std::size_t i = 0; i < n; ++i) swapped = swapped && alt.in_x1[i] != part.in_x1[i];
    r.expect(same || swapped, [&] { return "base " + std::to_string(b) + " neither fixes nor swaps"; });
  }
  r.details["X1"] = part.X1;
  r.details["X2"] = part.X2;
  return r;
}

inline SignPartition build_sign_partition(const FieldTower& t, const SpecialSet& S, std::size_t a1 = 0) {
  SignPartition part = partition_from(t, S, a1);
  require_pass(verify_sign_partition(t, S, part), ErrorCode::PartitionInconsistent);
  return part;
}

/// Number of pairs (k, i), 0 <= k < (q-1)/4, 0 <= i < q^2+q+1, with
/// T(mu^i a) = -omega^(4k+s) T(mu^-i b).
inline std::int64_t kappa_pair(const FieldTower& t, int s, Element a, Element b) {
  const std::uint32_t Q = t.plane_order(), M = t.order(), step = t.q() - 1;
  const std::int64_t quarter = (t.q() - 1) / 4;
  std::uint32_t up = t.log(a), down = t.log(b);
  std::int64_t count = 0;
  for (std::uint32_t i = 0; i < Q; ++i) {
    const Element t1 = t.trace_of_log(up), t2 = t.trace_of_log(down);
    if (t2.is_zero()) {
      if (t1.is_zero()) count += quarter;
    } else if (!t1.is_zero() && static_cast<int>(t.subfield_log(t.div(t.neg(t1), t2)) % 4) == s) {
      ++count;
    }
    up += step;
    if (up >= M) up -= M;
    down = down >= step ? down - step : down + M - step;
  }
  return count;
}

struct OrbitSumMatrix {
  std::size_t n = 0;  // q + 1
  std::array<IntMatrix, 4> Bs;
  IntMatrix B;  // 4n x 4n, row block s and column block t hold B_{t-s}, minus I on the diagonal
};

inline OrbitSumMatrix build_orbit_sum_matrices(const FieldTower& t, const SpecialSet& S, unsigned threads = 1) {
  OrbitSumMatrix m;
  m.n = S.size();
  const std::size_t n = m.n;
  for (auto& b : m.Bs) b = int_matrix(n, n);
  parallel_chunks(n * n, threads, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t i = k / n, j = k % n;
      const Element x = t.square(S[i]), y = t.square(S[j]);
      for (int s = 0; s < 4; ++s) m.Bs[s][i][j] = kappa_pair(t, s, x, y);
    }
  });
  m.B = int_matrix(4 * n, 4 * n);
  for (std::size_t rs = 0; rs < 4; ++rs)
    for (std::size_t cs = 0; cs < 4; ++cs)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m.B[rs * n + i][cs * n + j] = m.Bs[(cs + 4 - rs) % 4][i][j] - (rs == cs && i == j ? 1 : 0);
  return m;
}

/// Column sums of the collinearity relation between G-orbits off pi1 u pi2:
/// for p in column orbit C and row orbit R, |p^perp n R| - [p in R]. Every
/// point of a column orbit must give the same value; compared against B.
inline CheckReport verify_tacticality(const Quadric& Qd, const OrbitTable& orbits, const OrbitSumMatrix& m,
                                      unsigned threads = 1, std::uint64_t budget = 200'000'000) {
  CheckReport r("tacticality");
  const std::size_t slots = orbits.count();
  const std::size_t blocks = slots - 2;
  if (blocks != 4 * m.n) throw Error(ErrorCode::SizeMismatch, "orbit table does not match B");
  const std::uint64_t n = Qd.size();
  std::size_t per_orbit = orbits.members[2].size();
  std::size_t sample = per_orbit;
  if (n * n > budget) {
    sample = std::max<std::size_t>(1, budget / (n * blocks));
    r.scope = "sampled(" + std::to_string(sample) + " points per orbit)";
  }
  IntMatrix observed = int_matrix(blocks, blocks, -1);
  std::vector<CheckReport> parts(chunk_count(blocks, threads));
  std::vector<IntMatrix> cols(parts.size(), int_matrix(blocks, blocks, -1));
  parallel_chunks(blocks, threads, [&](std::size_t b, std::size_t e, std::size_t c) {
    std::vector<std::int64_t> counts(slots);
    for (std::size_t col = b; col < e; ++col) {
      const auto& mem = orbits.members[col + 2];
      const std::size_t stride = std::max<std::size_t>(1, mem.size() / sample);
      for (std::size_t k = 0; k < mem.size(); k += stride) {
        const std::uint32_t p = mem[k];
        std::fill(counts.begin(), counts.end(), 0);
        for (std::uint32_t x = 0; x < n; ++x)
          if (Qd.collinear(p, x)) ++counts[orbits.orbit_of[x]];
        --counts[col + 2];
        for (std::size_t row = 0; row < blocks; ++row) {
          auto& cell = cols[c][row][col];
          if (cell < 0) cell = counts[row + 2];
          parts[c].expect(cell == counts[row + 2], [&] {
            return "NotTactical: column orbit " + std::to_string(col + 2) + " point " + std::to_string(p) + " row orbit " +
                   std::to_string(row + 2);
          });
        }
      }
    }
  });
  for (auto& p : parts) r.merge(p);
  for (auto& c : cols)
    for (std::size_t i = 0; i < blocks; ++i)
      for (std::size_t j = 0; j < blocks; ++j)
        if (c[i][j] >= 0) observed[i][j] = c[i][j];
  for (std::size_t i = 0; i < blocks; ++i)
    for (std::size_t j = 0; j < blocks; ++j)
      r.expect(observed[i][j] == m.B[i][j], [&] {
        return "B[" + std::to_string(i) + "][" + std::to_string(j) + "]=" + std::to_string(m.B[i][j]) + " but counted " +
               std::to_string(observed[i][j]);
      });
  // rows of B: each column orbit sees the same number of points off the generators
  const std::int64_t q = Qd.tower().q();
  const std::int64_t row_total = q * q * q + 2 * q * q + q - 2 * (q + 1);
  for (std::size_t j = 0; j < blocks; ++j) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < blocks; ++i) s += m.B[i][j];
    r.expect(s == row_total, [&] { return "column " + std::to_string(j) + " sums to " + std::to_string(s); });
  }
  r.details["column_total"] = row_total;
  return r;
}

struct HForms {
  IntMatrix from_blocks;     // B0 - B2 - I
  IntMatrix gaussian_real, gaussian_imag;  // sum i^s B_s - I
  IntMatrix from_characters; // [q chi2(2T(a_i a_j))] - I
  IntMatrix from_partition;  // qK - qK' - I
};

inline HForms build_H(const FieldTower& t, const SpecialSet& S, const SignPartition& part, const OrbitSumMatrix& m) {
  const std::size_t n = m.n;
  const std::int64_t q = t.q();
  HForms h;
  h.from_blocks = int_matrix(n, n);
  h.gaussian_real = int_matrix(n, n);
  h.gaussian_imag = int_matrix(n, n);
  h.from_characters = int_matrix(n, n);
  h.from_partition = int_matrix(n, n);
  static constexpr std::array<std::complex<long long>, 4> ipow{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t d = i == j ? 1 : 0;
      h.from_blocks[i][j] = m.Bs[0][i][j] - m.Bs[2][i][j] - d;
      std::complex<long long> z{-d, 0};
      for (int s = 0; s < 4; ++s) z += ipow[s] * static_cast<long long>(m.Bs[s][i][j]);
      h.gaussian_real[i][j] = z.real();
      h.gaussian_imag[i][j] = z.imag();
      h.from_characters[i][j] = q * sign_of_pair(t, S[i], S[j]) - d;
      const std::int64_t K = i != j && part.in_x1[i] == part.in_x1[j];
      const std::int64_t Kp = part.in_x1[i] != part.in_x1[j];
      h.from_partition[i][j] = q * K - q * Kp - d;
    }
  return h;
}

/// 2v = c_X1 - c_X2.
inline IntVector sign_vector(const SignPartition& part) {
  IntVector v(part.in_x1.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = part.in_x1[i] ? 1 : -1;
  return v;
}

/// w = [z^0 v; z^1 v; z^2 v; z^3 v] with z = i^zeta_power, split into real
/// and imaginary integer parts.
struct LiftedVector {
  IntVector re, im;
};

inline LiftedVector lift_eigenvector(const IntVector& v, int zeta_power) {
  static constexpr std::array<std::array<int, 2>, 4> unit{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  LiftedVector w;
  const std::size_t n = v.size();
  w.re.assign(4 * n, 0);
  w.im.assign(4 * n, 0);
  for (int s = 0; s < 4; ++s) {
    const auto& z = unit[(s * ((zeta_power % 4) + 4)) % 4];
    for (std::size_t i = 0; i < n; ++i) {
      w.re[s * n + i] = z[0] * v[i];
      w.im[s * n + i] = z[1] * v[i];
    }
  }
  return w;
}

/// B1 = B3, the three forms of H, eps bookkeeping, v H = (q^2-1) v, and
/// B w = (q^2-1) w for the lifted vectors.
inline std::vector<CheckReport> verify_matrix_machinery(const FieldTower& t, const SpecialSet& S,
                                                        const SignPartition& part, const OrbitSumMatrix& m) {
  std::vector<CheckReport> out;
  const std::size_t n = m.n;
  const std::int64_t q = t.q();
  const std::int64_t lambda = q * q - 1;
  {
    CheckReport r("B1_equals_B3", n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        r.expect(m.Bs[1][i][j] == m.Bs[3][i][j], [&] { return "entry " + std::to_string(i) + "," + std::to_string(j); });
        r.expect(m.Bs[0][i][j] - m.Bs[2][i][j] == q * sign_of_pair(t, S[i], S[j]),
                 [&] { return "B0-B2 at " + std::to_string(i) + "," + std::to_string(j); });
      }
    r.domain_size = n * n;
    out.push_back(r);
  }
  {
    CheckReport r("kappa_pair_bookkeeping", n * n);
    const int chi2_2 = t.chi2(t.from_int(2));
    const std::int64_t quarter = (q - 1) / 4;
    r.expect(t.chi2(t.from_int(2)) == (t.subfield_log(t.neg(t.one())) % 4 == 0 ? 1 : -1),
             [] { return "chi4(-1) != chi2(2)"; });
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Element ab = t.mul(S[i], S[j]);
        const KappaProfile prof = kappa_profile(t, ab);
        std::int64_t eps = 0;
        const std::uint32_t lab = t.log(ab);
        for (std::uint32_t k = 0; k < t.plane_order(); ++k) {
          const std::uint32_t up = (lab + k * (t.q() - 1)) % t.order();
          const std::uint32_t down = (lab + t.order() - (k * (t.q() - 1)) % t.order()) % t.order();
          eps += t.trace_of_log(up).is_zero() && t.trace_of_log(down).is_zero();
        }
        for (int s = 0; s < 4; ++s) {
          // kappa_{i^s chi2(2)}: index s, shifted by 2 when chi2(2) = -1
          const int z = (s + (chi2_2 == 1 ? 0 : 2)) % 4;
          r.expect(m.Bs[s][i][j] == prof.counts[z] + quarter * eps, [&] {
            return "s=" + std::to_string(s) + " pair " + std::to_string(i) + "," + std::to_string(j);
          });
        }
      }
    out.push_back(r);
  }
  const HForms h = build_H(t, S, part, m);
  {
    CheckReport r("H_three_forms", n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto a = h.from_blocks[i][j];
        r.expect(h.gaussian_imag[i][j] == 0 && a == h.gaussian_real[i][j] && a == h.from_characters[i][j] && a == h.from_partition[i][j], [&] {
          return "H mismatch at " + std::to_string(i) + "," + std::to_string(j);
        });
        if (i == j) r.expect(a == -1, [&] { return "diagonal " + std::to_string(i); });
        else r.expect(a == q || a == -q, [&] { return "off-diagonal " + std::to_string(a); });
      }
    out.push_back(r);
  }
  {
    CheckReport r("H_eigenvector");
    const IntVector v2 = sign_vector(part);
    const IntVector vh = vec_mat(v2, h.from_blocks);
    for (std::size_t i = 0; i < n; ++i)
      r.expect(vh[i] == lambda * v2[i], [&] { return "component " + std::to_string(i); });
    out.push_back(r);
  }
  {
    CheckReport r("B_eigenvector_lift");
    const IntVector v2 = sign_vector(part);
    auto check = [&](const IntVector& w, const char* tag) {
      const IntVector bw = mat_vec(m.B, w);
      for (std::size_t i = 0; i < w.size(); ++i)
        r.expect(bw[i] == lambda * w[i], [&] { return std::string(tag) + " component " + std::to_string(i); });
    };
    const LiftedVector w = lift_eigenvector(v2, 1);
    check(w.re, "w1");
    check(w.im, "w2");
    IntVector sum(w.re.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = w.re[i] + w.im[i];
    check(sum, "w1+w2");
    const LiftedVector zero = lift_eigenvector(IntVector(n, 0), 1);
    r.expect(std::all_of(zero.re.begin(), zero.re.end(), [](auto x) { return x == 0; }), [] { return "zero lift"; });
    out.push_back(r);
  }
  return out;
}

enum class TightLabel { T1, T2, T1prime, T2prime };

inline const char* to_string(TightLabel l) {
  switch (l) {
    case TightLabel::T1: return "T1";
    case TightLabel::T2: return "T2";
    case TightLabel::T1prime: return "T1prime";
    case TightLabel::T2prime: return "T2prime";
  }
  return "?";
}

struct TightSet {
  TightLabel label = TightLabel::T1;
  std::uint64_t x = 0;
  std::vector<std::uint32_t> points;  // sorted quadric indices
  std::vector<std::pair<std::uint32_t, std::uint32_t>> orbit_keys;  // (s, position in S)
  std::size_t a1 = 0;
};

/// Orbit-key classes s in {0,1,2,3} taken from X1 (first) and X2 (second).
inline std::array<std::array<int, 2>, 2> class_layout(TightLabel l) {
  switch (l) {
    case TightLabel::T1: return {{{0, 1}, {2, 3}}};
    case TightLabel::T2: return {{{2, 3}, {0, 1}}};
    case TightLabel::T1prime: return {{{0, 3}, {1, 2}}};
    case TightLabel::T2prime: return {{{1, 2}, {0, 3}}};
  }
  return {};
}

inline TightSet assemble_tight_set(const FieldTower& t, const SpecialSet& S, const SignPartition& part,
                                   const OrbitTable& orbits, TightLabel label) {
  if (orbits.group != OrbitGroup::full_G) throw Error(ErrorCode::AssemblyMismatch, "needs G-orbits");
  TightSet ts;
  ts.label = label;
  ts.x = (std::uint64_t{t.q()} * t.q() - 1) / 2;
  ts.a1 = part.a1;
  const auto layout = class_layout(label);
  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto& cls = layout[part.in_x1[i] ? 0 : 1];
    for (int s : cls) {
      ts.orbit_keys.emplace_back(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(i));
      const auto& mem = orbits.members[orbit_slot(orbits, s, static_cast<std::uint32_t>(i), S.size())];
      ts.points.insert(ts.points.end(), mem.begin(), mem.end());
    }
  }
  std::sort(ts.points.begin(), ts.points.end());
  std::sort(ts.orbit_keys.begin(), ts.orbit_keys.end());
  return ts;
}

/// Points (1, omega^s a^2) for the orbit keys, as representatives.
inline QuadricPoint orbit_representative(const FieldTower& t, std::uint32_t s, Element a) {
  return {t.one(), t.mul(t.pow(t.omega(), s), t.square(a))};
}

struct TightSetFamily {
  TightSet T1, T2, T1prime, T2prime;
};

/// Sizes, disjointness, the partition of the quadric, and the similarities
/// (u,v) -> (u, omega^2 v) : T1 -> T2 and (u,v) -> (u, omega v) : T1' -> T1.
inline std::vector<CheckReport> verify_assembly(const Quadric& Qd, const SpecialSet& S, const OrbitTable& orbits,
                                                const TightSetFamily& fam) {
  const FieldTower& t = Qd.tower();
  const std::uint64_t q = t.q();
  const std::uint64_t want = (q * q - 1) / 2 * (q * q + q + 1);
  std::vector<CheckReport> out;
  {
    CheckReport r("tight_set_sizes");
    for (const TightSet* ts : {&fam.T1, &fam.T2, &fam.T1prime, &fam.T2prime}) {
      r.expect(ts->points.size() == want, [&] {
        return std::string(to_string(ts->label)) + " has " + std::to_string(ts->points.size()) + " points";
      });
      r.expect(ts->orbit_keys.size() == 2 * S.size(), [&] { return "orbit key count"; });
      for (auto i : ts->points)
        r.expect(!Qd.in_pi1(i) && !Qd.in_pi2(i), [&] { return std::string(to_string(ts->label)) + " meets a generator"; });
      // representatives (1, omega^s a^2) land in the recorded orbits
      for (auto [s, i] : ts->orbit_keys) {
        const auto idx = Qd.index_of(orbit_representative(t, s, S[i]));
        r.expect(idx != Quadric::kAbsent && orbits.orbit_of[idx] == orbit_slot(orbits, s, i, S.size()),
                 [&] { return "representative for key (" + std::to_string(s) + "," + std::to_string(i) + ")"; });
      }
    }
    r.details["expected_size"] = want;
    out.push_back(r);
  }
  {
    CheckReport r("quadric_partition", Qd.size());
    for (auto pair : {std::pair{&fam.T1, &fam.T2}, std::pair{&fam.T1prime, &fam.T2prime}}) {
      std::vector<int> cover(Qd.size(), 0);
      for (auto i : pair.first->points) ++cover[i];
      for (auto i : pair.second->points) ++cover[i];
      for (std::uint32_t i = 0; i < Qd.size(); ++i) cover[i] += Qd.in_pi1(i) + Qd.in_pi2(i);
      for (std::uint32_t i = 0; i < Qd.size(); ++i)
        r.expect(cover[i] == 1, [&] { return "point " + std::to_string(i) + " covered " + std::to_string(cover[i]) + " times"; });
    }
    out.push_back(r);
  }
  {
    CheckReport r("similarities");
    auto image = [&](const TightSet& ts, std::int64_t k) {
      const Permutation pm = Qd.permutation(IsometryMap::scale_v(k));
      std::vector<std::uint32_t> img;
      for (auto i : ts.points) img.push_back(pm[i]);
      std::sort(img.begin(), img.end());
      return img;
    };
    r.expect(image(fam.T1, 2) == fam.T2.points, [] { return "omega^2 does not send T1 to T2"; });
    r.expect(image(fam.T1prime, 1) == fam.T1.points, [] { return "omega does not send T1' to T1"; });
    r.expect(image(fam.T2prime, 1) == fam.T2.points, [] { return "omega does not send T2' to T2"; });
    out.push_back(r);
  }
  return out;
}

inline TightSetFamily build_tight_sets(const FieldTower& t, const SpecialSet& S, const SignPartition& part,
                                       const OrbitTable& orbits) {
  TightSetFamily fam;
  fam.T1 = assemble_tight_set(t, S, part, orbits, TightLabel::T1);
  fam.T2 = assemble_tight_set(t, S, part, orbits, TightLabel::T2);
  fam.T1prime = assemble_tight_set(t, S, part, orbits, TightLabel::T1prime);
  fam.T2prime = assemble_tight_set(t, S, part, orbits, TightLabel::T2prime);
  return fam;
}

}  // namespace clq
