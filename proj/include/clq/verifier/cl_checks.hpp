#pragma once

// Cameron-Liebler certificates for a line class of PG(3,q): intersection
// counts per line, the point-plane pencil identity, and spreads.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "clq/error.hpp"
#include "clq/flinalg.hpp"
#include "clq/parallel.hpp"
#include "clq/pg3_geometry.hpp"
#include "clq/report.hpp"

namespace clq {

/// |star(P) n L| for every point P.
inline std::vector<std::uint32_t> star_counts(const Pg3Scene& sc, const LineClass& L) {
  std::vector<std::uint32_t> star(sc.num_points(), 0);
  for (auto l : L.lines)
    for (auto P : sc.line_points(l)) ++star[P];
  return star;
}

/// |line(tau) n L| for every plane tau.
inline std::vector<std::uint32_t> plane_counts(const Pg3Scene& sc, const LineClass& L) {
  std::vector<std::uint32_t> out(sc.num_planes(), 0);
  for (auto l : L.lines)
    for (auto t : sc.line_planes(l)) ++out[t];
  return out;
}

/// Lines through P inside tau.
inline std::vector<std::uint32_t> pencil(const Pg3Scene& sc, std::uint32_t P, std::uint32_t tau) {
  if (!sc.incident(P, tau)) throw Error(ErrorCode::NotIncident, "point " + std::to_string(P) + " not on plane " + std::to_string(tau));
  std::vector<std::uint32_t> out;
  for (auto l : sc.point_lines(P))
    if (sc.in_plane(l, tau)) out.push_back(l);
  return out;
}

/// Every line meets x(q+1) + (q^2-1)[l in L] other lines of L.
inline CheckReport verify_cl_line_counts(const Pg3Scene& sc, const LineClass& L, unsigned threads = 1) {
  CheckReport r("cl_line_intersections", sc.num_lines());
  const std::uint64_t q = sc.q();
  const auto star = star_counts(sc, L);
  std::vector<CheckReport> parts(chunk_count(sc.num_lines(), threads));
  parallel_chunks(sc.num_lines(), threads, [&](std::size_t b, std::size_t e, std::size_t c) {
    for (std::size_t l = b; l < e; ++l) {
      const std::uint64_t in = L.contains(static_cast<std::uint32_t>(l));
      std::uint64_t meet = 0;
      for (auto P : sc.line_points(static_cast<std::uint32_t>(l))) meet += star[P];
      meet -= (q + 1) * in;
      const std::uint64_t want = L.x * (q + 1) + (q * q - 1) * in;
      parts[c].expect(meet == want, [&] { return "line " + std::to_string(l) + ": " + std::to_string(meet) + " != " + std::to_string(want); });
    }
  });
  for (auto& p : parts) r.merge(p);
  r.details["x"] = L.x;
  r.details["expected_off"] = L.x * (q + 1);
  r.details["expected_on"] = L.x * (q + 1) + q * q - 1;
  return r;
}

/// |star(r) n L| + |line(tau) n L| = x + (q+1)|pencil(r,tau) n L| for
/// incident pairs; exhaustive when the pair count is within `limit`, else a
/// seeded sample of points with all their planes.
inline CheckReport verify_cl_pencils(const Pg3Scene& sc, const LineClass& L, std::uint64_t limit = 100'000,
                                     std::uint64_t seed = 1) {
  CheckReport r("cl_pencil_identity");
  const std::uint64_t q = sc.q();
  const auto star = star_counts(sc, L);
  const auto plane = plane_counts(sc, L);
  std::vector<std::uint32_t> order(sc.num_points());
  std::iota(order.begin(), order.end(), 0u);
  const std::uint64_t per_point = q * q + q + 1;
  const std::uint64_t total = per_point * sc.num_points();
  if (total > limit) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(static_cast<std::size_t>((limit + per_point - 1) / per_point));
    r.scope = "sampled(seed=" + std::to_string(seed) + ")";
  }
  std::vector<std::uint32_t> pc(sc.num_planes(), 0);
  std::vector<char> mark(sc.num_planes(), 0);
  std::vector<std::uint32_t> planes;
  for (auto P : order) {
    planes.clear();
    for (auto l : sc.point_lines(P))
      for (auto t : sc.line_planes(l)) {
        if (!mark[t]) {
          mark[t] = 1;
          planes.push_back(t);
        }
        if (L.contains(l)) ++pc[t];
      }
    r.expect(planes.size() == per_point, [&] { return "point " + std::to_string(P) + " lies on " + std::to_string(planes.size()) + " planes"; });
    for (auto t : planes) {
      const std::uint64_t lhs = star[P] + plane[t];
      const std::uint64_t rhs = L.x + (q + 1) * pc[t];
      r.expect(lhs == rhs, [&] {
        return "pair (" + std::to_string(P) + "," + std::to_string(t) + "): " + std::to_string(lhs) + " != " + std::to_string(rhs);
      });
      pc[t] = 0;
      mark[t] = 0;
    }
  }
  r.domain_size = total;
  r.details["points_checked"] = order.size();
  return r;
}

/// Spread partition check, then |S n L| = x.
inline CheckReport verify_cl_spreads(const Pg3Scene& sc, const LineClass& L, std::size_t random_images = 100,
                                     std::uint64_t seed = 1) {
  CheckReport r("cl_spreads");
  const auto base = regular_spread(sc);
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> cover(sc.num_points());
  std::size_t valid = 0;
  for (std::size_t k = 0; k <= random_images; ++k) {
    std::vector<std::uint32_t> spread = base;
    if (k > 0) {
      const FMatrix A = random_invertible(sc.subfield(), rng);
      for (auto& l : spread) l = sc.apply_to_line(A, l);
    }
    std::fill(cover.begin(), cover.end(), 0);
    for (auto l : spread)
      for (auto P : sc.line_points(l)) ++cover[P];
    const bool is_spread = spread.size() == std::size_t{sc.q()} * sc.q() + 1 &&
                           std::all_of(cover.begin(), cover.end(), [](auto c) { return c == 1; });
    r.expect(is_spread, [&] { return "image " + std::to_string(k) + " is not a spread"; });
    std::uint64_t hits = 0;
    for (auto l : spread) hits += L.contains(l);
    r.expect(hits == L.x, [&] { return "spread " + std::to_string(k) + " meets the class in " + std::to_string(hits) + " lines"; });
    valid += is_spread;
  }
  r.scope = "sampled(seed=" + std::to_string(seed) + ")";
  r.domain_size = random_images + 1;
  r.details["spreads"] = random_images + 1;
  r.details["valid_spreads"] = valid;
  return r;
}

struct ClOptions {
  bool pencils = true;
  bool spreads = true;
  std::uint64_t pencil_limit = 100'000;
  std::size_t random_spreads = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

inline std::vector<CheckReport> verify_cameron_liebler(const Pg3Scene& sc, const LineClass& L, const ClOptions& opt = {}) {
  std::vector<CheckReport> out;
  {
    CheckReport r("cl_size");
    const std::uint64_t q = sc.q();
    r.expect(L.size() == L.x * (q * q + q + 1), [&] { return "class has " + std::to_string(L.size()) + " lines"; });
    out.push_back(r);
  }
  out.push_back(verify_cl_line_counts(sc, L, opt.threads));
  if (opt.pencils && sc.has_planes()) out.push_back(verify_cl_pencils(sc, L, opt.pencil_limit, opt.seed));
  if (opt.spreads) out.push_back(verify_cl_spreads(sc, L, opt.random_spreads, opt.seed));
  for (auto& r : out) r.name = L.label + "." + r.name;
  return out;
}

}  // namespace clq
