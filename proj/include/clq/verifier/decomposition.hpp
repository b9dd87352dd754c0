#pragma once

// For q = 3^(2e): the symmetric tactical decomposition with point classes
// {p0}, pi, P1, P2 and line classes star(p0), line(pi), L1, L2, and the
// two-intersection sets it leaves in affine planes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clq/error.hpp"
#include "clq/pg3_geometry.hpp"
#include "clq/report.hpp"
#include "clq/verifier/cl_checks.hpp"

namespace clq {

using Table4 = std::array<std::array<std::int64_t, 4>, 4>;

/// e with q = 3^(2e), if any.
inline std::optional<std::uint32_t> square_power_of_three(std::uint32_t q) {
  std::uint32_t e = 0, v = 1;
  while (v < q) {
    v *= 9;
    ++e;
  }
  if (v == q && e > 0) return e;
  return std::nullopt;
}

/// Rows: point classes p0, pi, P1, P2. Columns: star(p0), line(pi), L1, L2.
inline Table4 expected_lines_per_point(std::int64_t q, std::int64_t s) {
  return {{{q * q + q + 1, 0, 0, 0},
           {1, q + 1, (q * q - 1) / 2, (q * q - 1) / 2},
           {1, 0, (q + 1) * (q - s) / 2, (q + 1) * (q + s) / 2},
           {1, 0, (q + 1) * (q + s) / 2, (q + 1) * (q - s) / 2}}};
}

/// Rows: point classes. Columns: line classes.
inline Table4 expected_points_per_line(std::int64_t q, std::int64_t s) {
  return {{{1, 0, 0, 0},
           {1, q + 1, 1, 1},
           {(q - 1) / 2, 0, (q - s) / 2, (q + s) / 2},
           {(q - 1) / 2, 0, (q + s) / 2, (q - s) / 2}}};
}

struct DecompositionReport {
  std::uint32_t e = 0;
  std::vector<std::uint8_t> point_class;  // 0 p0, 1 pi, 2 P1, 3 P2
  std::vector<std::uint8_t> line_class;   // 0 star, 1 line(pi), 2 L1, 3 L2
  Table4 lines_per_point{}, points_per_line{};
  Table4 expected_lpp{}, expected_ppl{};
  CheckReport report{"tactical_decomposition"};
};

inline nlohmann::json table_json(const Table4& t) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& row : t) j.push_back(row);
  return j;
}

inline DecompositionReport verify_tactical_decomposition(const Pg3Scene& sc, const KleinMap& km, const LineClass& L1,
                                                         const LineClass& L2) {
  const auto e = square_power_of_three(sc.q());
  if (!e) throw Error(ErrorCode::InvalidQ, "q = " + std::to_string(sc.q()) + " is not an even power of 3");
  DecompositionReport d;
  d.e = *e;
  const std::int64_t q = sc.q();
  std::int64_t s = 1;
  for (std::uint32_t k = 0; k < d.e; ++k) s *= 3;
  d.expected_lpp = expected_lines_per_point(q, s);
  d.expected_ppl = expected_points_per_line(q, s);
  CheckReport& r = d.report;

  const auto star1 = star_counts(sc, L1);
  d.point_class.assign(sc.num_points(), 0);
  for (std::uint32_t P = 0; P < sc.num_points(); ++P) {
    if (P == km.p0) d.point_class[P] = 0;
    else if (sc.incident(P, km.pi)) d.point_class[P] = 1;
    else if (star1[P] == static_cast<std::uint32_t>(d.expected_lpp[2][2])) d.point_class[P] = 2;
    else if (star1[P] == static_cast<std::uint32_t>(d.expected_lpp[3][2])) d.point_class[P] = 3;
    else {
      r.fail("NotTactical: point " + std::to_string(P) + " has " + std::to_string(star1[P]) + " lines of L1");
      d.point_class[P] = 2;
    }
  }
  d.line_class.assign(sc.num_lines(), 255);
  for (auto l : sc.point_lines(km.p0)) d.line_class[l] = 0;
  for (auto l : sc.plane_lines(km.pi)) d.line_class[l] = 1;
  for (auto l : L1.lines) d.line_class[l] = 2;
  for (auto l : L2.lines) d.line_class[l] = 3;
  for (std::uint32_t l = 0; l < sc.num_lines(); ++l)
    r.expect(d.line_class[l] != 255, [&] { return "line " + std::to_string(l) + " in no class"; });

  for (auto& row : d.lines_per_point) row.fill(-1);
  for (auto& row : d.points_per_line) row.fill(-1);
  // lines per point: constant over every point of a class
  for (std::uint32_t P = 0; P < sc.num_points(); ++P) {
    std::array<std::int64_t, 4> cnt{};
    for (auto l : sc.point_lines(P))
      if (d.line_class[l] < 4) ++cnt[d.line_class[l]];
    auto& row = d.lines_per_point[d.point_class[P]];
    for (int c = 0; c < 4; ++c) {
      if (row[c] < 0) row[c] = cnt[c];
      r.expect(row[c] == cnt[c], [&] { return "NotTactical: point " + std::to_string(P) + " class column " + std::to_string(c); });
    }
  }
  // points per line: constant over every line of a class
  for (std::uint32_t l = 0; l < sc.num_lines(); ++l) {
    if (d.line_class[l] >= 4) continue;
    std::array<std::int64_t, 4> cnt{};
    for (auto P : sc.line_points(l)) ++cnt[d.point_class[P]];
    for (int pc = 0; pc < 4; ++pc) {
      auto& cell = d.points_per_line[pc][d.line_class[l]];
      if (cell < 0) cell = cnt[pc];
      r.expect(cell == cnt[pc], [&] { return "NotTactical: line " + std::to_string(l) + " point class " + std::to_string(pc); });
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      r.expect(d.lines_per_point[i][j] == d.expected_lpp[i][j], [&] {
        return "lines-per-point (" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(d.lines_per_point[i][j]) +
               ", expected " + std::to_string(d.expected_lpp[i][j]);
      });
      r.expect(d.points_per_line[i][j] == d.expected_ppl[i][j], [&] {
        return "points-per-line (" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(d.points_per_line[i][j]) +
               ", expected " + std::to_string(d.expected_ppl[i][j]);
      });
    }
  r.domain_size = std::uint64_t{sc.num_points()} + sc.num_lines();
  r.details["e"] = d.e;
  r.details["lines_per_point"] = table_json(d.lines_per_point);
  r.details["points_per_line"] = table_json(d.points_per_line);
  return d;
}

/// Intersection sizes of K = P1 n (tau \ pi) with the affine lines of tau.
struct AffineSet {
  std::uint32_t plane = 0;
  std::vector<std::uint32_t> points;
  std::size_t complement = 0;  // |P2 n tau'|
  std::set<std::int64_t> line_sizes;
  std::size_t affine_lines = 0;
};

inline AffineSet extract_affine_set(const Pg3Scene& sc, const KleinMap& km, const DecompositionReport& d, std::uint32_t tau) {
  if (tau == km.pi || sc.incident(km.p0, tau)) throw Error(ErrorCode::BadFlag, "plane must differ from pi and miss p0");
  AffineSet a;
  a.plane = tau;
  for (std::uint32_t P = 0; P < sc.num_points(); ++P) {
    if (!sc.incident(P, tau)) continue;
    if (d.point_class[P] == 2) a.points.push_back(P);
    else if (d.point_class[P] == 3) ++a.complement;
  }
  for (auto l : sc.plane_lines(tau)) {
    if (sc.in_plane(l, km.pi)) continue;  // the line at infinity
    ++a.affine_lines;
    std::int64_t k = 0;
    for (auto P : sc.line_points(l)) k += d.point_class[P] == 2;
    a.line_sizes.insert(k);
  }
  return a;
}

/// Every admissible plane: type (m, n) with m < n, k = |K| a root of
/// k^2 - k(q(n+m-1) + n+m) + mnq(q+1) = 0, and P2 n tau' the complement.
/// The complement of a type (m, n) set in AG(2,q) has type (q-n, q-m), which
/// here is the same type, so both roots q(q-1)/2 and q(q+1)/2 can occur;
/// the histogram is in details["size_counts"].
inline CheckReport verify_affine_sets(const Pg3Scene& sc, const KleinMap& km, const DecompositionReport& d) {
  CheckReport r("affine_two_intersection");
  const std::int64_t q = sc.q();
  std::int64_t s = 1;
  for (std::uint32_t k = 0; k < d.e; ++k) s *= 3;
  const std::int64_t want_m = (q - s) / 2, want_n = (q + s) / 2;
  std::size_t planes = 0;
  std::map<std::int64_t, std::size_t> sizes;
  for (std::uint32_t tau = 0; tau < sc.num_planes(); ++tau) {
    if (tau == km.pi || sc.incident(km.p0, tau)) continue;
    ++planes;
    const AffineSet a = extract_affine_set(sc, km, d, tau);
    const std::int64_t k = static_cast<std::int64_t>(a.points.size());
    ++sizes[k];
    r.expect(k + static_cast<std::int64_t>(a.complement) == q * q,
             [&] { return "plane " + std::to_string(tau) + ": P1 and P2 do not cover the affine part"; });
    const bool two = a.line_sizes.size() == 2;
    r.expect(two && a.affine_lines == static_cast<std::size_t>(q * q + q), [&] {
      return "NotTwoIntersection: plane " + std::to_string(tau) + " has " + std::to_string(a.line_sizes.size()) + " line sizes";
    });
    if (!two) continue;
    const std::int64_t m = *a.line_sizes.begin(), n = *a.line_sizes.rbegin();
    r.expect(m == want_m && n == want_n, [&] { return "plane " + std::to_string(tau) + " type (" + std::to_string(m) + "," + std::to_string(n) + ")"; });
    r.expect(k * k - k * (q * (n + m - 1) + n + m) + m * n * q * (q + 1) == 0,
             [&] { return "plane " + std::to_string(tau) + ": k=" + std::to_string(k) + " violates the quadratic"; });
  }
  r.domain_size = planes;
  r.details["planes"] = planes;
  r.details["type"] = {want_m, want_n};
  nlohmann::json hist = nlohmann::json::object();
  for (auto [k, c] : sizes) hist[std::to_string(k)] = c;
  r.details["size_counts"] = hist;
  return r;
}

}  // namespace clq
