#pragma once

// Point orbits of <c,z> on PG(3,q), a-values, and patterns of a line class
// along a line.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "clq/error.hpp"
#include "clq/klein_quadric.hpp"
#include "clq/pg3_geometry.hpp"
#include "clq/report.hpp"
#include "clq/verifier/cl_checks.hpp"

namespace clq {

/// Collineation of PG(3,q) induced by a quadric permutation preserving the
/// generator system of pi1: P maps to the meet of the images of two lines
/// through P.
inline Permutation induced_point_permutation(const Pg3Scene& sc, const KleinMap& km, const Permutation& perm) {
  Permutation out(sc.num_points());
  for (std::uint32_t P = 0; P < sc.num_points(); ++P) {
    const auto lines = sc.point_lines(P);
    const std::uint32_t a = km.line_of[perm[km.point_of[lines[0]]]];
    const std::uint32_t b = km.line_of[perm[km.point_of[lines[1]]]];
    out[P] = sc.meet(a, b);
    if (out[P] == Pg3Scene::kNone) throw Error(ErrorCode::BadTransform, "map does not preserve stars");
    const std::uint32_t c = km.line_of[perm[km.point_of[lines[2]]]];
    if (!sc.on_line(out[P], c)) throw Error(ErrorCode::BadTransform, "images of a star are not concurrent");
  }
  return out;
}

struct PointOrbits {
  std::vector<std::uint32_t> orbit_of;
  std::vector<std::vector<std::uint32_t>> members;  // {p0}, pi, then the rest by least element
};

inline PointOrbits compute_point_orbits(const Pg3Scene& sc, const KleinMap& km, const std::vector<Permutation>& gens) {
  PointOrbits po;
  po.orbit_of.assign(sc.num_points(), Pg3Scene::kNone);
  std::vector<std::vector<std::uint32_t>> orbits;
  for (std::uint32_t s = 0; s < sc.num_points(); ++s) {
    if (po.orbit_of[s] != Pg3Scene::kNone) continue;
    const std::uint32_t id = static_cast<std::uint32_t>(orbits.size());
    std::vector<std::uint32_t> queue{s};
    po.orbit_of[s] = id;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (const auto& g : gens)
        if (po.orbit_of[g[queue[h]]] == Pg3Scene::kNone) {
          po.orbit_of[g[queue[h]]] = id;
          queue.push_back(g[queue[h]]);
        }
    std::sort(queue.begin(), queue.end());
    orbits.push_back(std::move(queue));
  }
  // reorder: orbit of p0, orbit containing pi's points, rest in discovery order
  std::vector<std::size_t> order;
  const std::size_t o0 = po.orbit_of[km.p0];
  order.push_back(o0);
  std::size_t opi = orbits.size();
  if (km.pi != Pg3Scene::kNone)
    for (std::uint32_t P = 0; P < sc.num_points(); ++P)
      if (sc.incident(P, km.pi)) {
        opi = po.orbit_of[P];
        break;
      }
  if (opi < orbits.size() && opi != o0) order.push_back(opi);
  for (std::size_t i = 0; i < orbits.size(); ++i)
    if (i != o0 && i != opi) order.push_back(i);
  for (auto i : order) po.members.push_back(orbits[i]);
  for (std::uint32_t k = 0; k < po.members.size(); ++k)
    for (auto P : po.members[k]) po.orbit_of[P] = k;
  return po;
}

inline CheckReport verify_point_orbits(const Pg3Scene& sc, const KleinMap& km, const PointOrbits& po) {
  CheckReport r("point_orbits");
  const std::uint64_t q = sc.q(), Q = q * q + q + 1;
  r.expect(po.members.size() == 6, [&] { return std::to_string(po.members.size()) + " orbits"; });
  if (po.members.size() == 6) {
    r.expect(po.members[0].size() == 1 && po.members[0][0] == km.p0, [] { return "p0 not a fixed point"; });
    r.expect(po.members[1].size() == Q, [&] { return "plane orbit has " + std::to_string(po.members[1].size()); });
    for (auto P : po.members[1]) r.expect(sc.incident(P, km.pi), [&] { return "plane orbit leaves pi"; });
    for (std::size_t k = 2; k < 6; ++k)
      r.expect(po.members[k].size() == (q - 1) / 4 * Q, [&] { return "orbit " + std::to_string(k) + " size " + std::to_string(po.members[k].size()); });
  }
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& m : po.members) sizes.push_back(m.size());
  r.details["sizes"] = sizes;
  return r;
}

struct AValues {
  std::array<std::uint64_t, 4> a{};       // sorted
  std::array<std::uint64_t, 4> by_orbit{};  // star count / (q+1) on point orbits 2..5
  std::uint64_t plane_star = 0;           // star count on pi
};

/// Star counts constant on each off-plane orbit, divided by q+1.
inline AValues extract_a_values(const Pg3Scene& sc, const LineClass& L, const PointOrbits& po, CheckReport* rep = nullptr) {
  CheckReport r("a_values");
  const std::uint64_t q = sc.q();
  const auto star = star_counts(sc, L);
  AValues av;
  if (po.members.size() != 6) throw Error(ErrorCode::NotConstantOnOrbit, "unexpected orbit structure");
  for (std::size_t k = 0; k < 6; ++k) {
    const std::uint64_t v = star[po.members[k][0]];
    for (auto P : po.members[k])
      r.expect(star[P] == v, [&] { return "NotConstantOnOrbit: orbit " + std::to_string(k) + " point " + std::to_string(P); });
    if (k == 1) av.plane_star = v;
    if (k >= 2) {
      r.expect(v % (q + 1) == 0, [&] { return "star count " + std::to_string(v) + " not divisible by q+1"; });
      av.by_orbit[k - 2] = v / (q + 1);
    }
  }
  r.expect(star[po.members[0][0]] == 0, [] { return "star(p0) meets the class"; });
  av.a = av.by_orbit;
  std::sort(av.a.begin(), av.a.end());
  const std::int64_t Q = static_cast<std::int64_t>(q);
  const std::int64_t a1 = static_cast<std::int64_t>(av.a[0]), a2 = static_cast<std::int64_t>(av.a[1]);
  r.expect(static_cast<std::int64_t>(av.a[3]) == Q - a1, [] { return "a4 != q - a1"; });
  r.expect(static_cast<std::int64_t>(av.a[2]) == Q - a2, [] { return "a3 != q - a2"; });
  r.expect(a1 * (Q - a1) + a2 * (Q - a2) == Q * (Q - 1) / 2, [] { return "a1(q-a1) + a2(q-a2) != q(q-1)/2"; });
  // (q - sqrt(2q-1))/2 <= a1 <= (q - sqrt q)/2 <= a2 <= (q-1)/2, squared out
  const std::int64_t d1 = Q - 2 * a1, d2 = Q - 2 * a2;
  r.expect(d1 <= 0 || d1 * d1 <= 2 * Q - 1, [] { return "a1 below (q - sqrt(2q-1))/2"; });
  r.expect(d1 >= 0 && d1 * d1 >= Q, [] { return "a1 above (q - sqrt q)/2"; });
  r.expect(d2 <= 0 || d2 * d2 <= Q, [] { return "a2 below (q - sqrt q)/2"; });
  r.expect(2 * a2 <= Q - 1, [] { return "a2 above (q-1)/2"; });
  r.details["a"] = av.a;
  r.details["plane_star"] = av.plane_star;
  if (rep) *rep = r;
  return av;
}

struct PatternMatrix {
  std::uint32_t line = 0;
  std::vector<std::uint32_t> points, planes;
  std::vector<std::vector<std::int64_t>> t;
};

/// t_ij = |L n pencil(P_i, tau_j) \ {line}|.
inline PatternMatrix compute_pattern(const Pg3Scene& sc, const LineClass& L, std::uint32_t line) {
  PatternMatrix pm;
  pm.line = line;
  const auto pts = sc.line_points(line);
  const auto pls = sc.line_planes(line);
  pm.points.assign(pts.begin(), pts.end());
  pm.planes.assign(pls.begin(), pls.end());
  const std::size_t n = pm.points.size();
  pm.t.assign(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (auto m : sc.point_lines(pm.points[i])) {
      if (m == line || !L.contains(m)) continue;
      const auto mp = sc.line_points(m);
      const std::uint32_t R = mp[0] == pm.points[i] ? mp[1] : mp[0];
      std::size_t j = 0;
      while (j < n && !sc.incident(R, pm.planes[j])) ++j;
      if (j == n) throw Error(ErrorCode::PatternViolation, "line through a point of l lies in no plane through l");
      ++pm.t[i][j];
    }
  return pm;
}

struct PatternOptions {
  std::size_t line_limit = 10'000;
  std::uint64_t seed = 1;
  const AValues* a_values = nullptr;  // enables the block check on lines through p0
  std::uint32_t p0 = Pg3Scene::kNone;
  std::uint32_t pi = Pg3Scene::kNone;
};

/// Properties (i)-(iv) of the pattern on every line (or a seeded sample), and
/// the row structure on lines through p0.
inline CheckReport verify_pattern_props(const Pg3Scene& sc, const LineClass& L, const PatternOptions& opt = {}) {
  CheckReport r("pattern_props");
  const std::int64_t q = sc.q(), x = static_cast<std::int64_t>(L.x);
  std::vector<std::uint32_t> lines(sc.num_lines());
  std::iota(lines.begin(), lines.end(), 0u);
  if (lines.size() > opt.line_limit) {
    std::mt19937_64 rng(opt.seed);
    std::shuffle(lines.begin(), lines.end(), rng);
    lines.resize(opt.line_limit);
    // always include some lines through p0
    if (opt.p0 != Pg3Scene::kNone)
      for (auto l : sc.point_lines(opt.p0)) lines.push_back(l);
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    r.scope = "sampled(seed=" + std::to_string(opt.seed) + ")";
  }
  std::size_t through_p0 = 0;
  for (auto l : lines) {
    const PatternMatrix pm = compute_pattern(sc, L, l);
    const std::int64_t c = L.contains(l);
    const std::size_t n = pm.points.size();
    std::vector<std::int64_t> row(n, 0), col(n, 0);
    std::int64_t sum = 0, sq = 0;
    bool bounds = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto v = pm.t[i][j];
        bounds = bounds && v >= 0 && v <= q;
        row[i] += v;
        col[j] += v;
        sum += v;
        sq += v * v;
      }
    auto tag = [&](const char* what) { return std::string(what) + " on line " + std::to_string(l); };
    r.expect(bounds, [&] { return tag("(i)"); });
    r.expect(sum == x * (q + 1) + c * (q * q - 1), [&] { return tag("(ii)") + " sum " + std::to_string(sum); });
    bool iii = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t m = 0; m < n; ++m) iii = iii && row[k] + col[m] == x + (q + 1) * pm.t[k][m] + (q - 1) * c;
    r.expect(iii, [&] { return tag("(iii)"); });
    const std::int64_t xc = x - c;
    r.expect(sq == xc * xc + q * xc + c * q * q * (q + 1), [&] { return tag("(iv)") + " sum of squares " + std::to_string(sq); });

    if (opt.a_values && opt.p0 != Pg3Scene::kNone && sc.on_line(opt.p0, l)) {
      ++through_p0;
      std::vector<std::uint64_t> consts;
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        const bool constant = std::all_of(pm.t[i].begin(), pm.t[i].end(), [&](auto v) { return v == pm.t[i][0]; });
        ok = ok && constant;
        const auto v = pm.t[i][0];
        if (pm.points[i] == opt.p0) ok = ok && v == 0;
        else if (opt.pi != Pg3Scene::kNone && sc.incident(pm.points[i], opt.pi)) ok = ok && v == (q - 1) / 2;
        else consts.push_back(static_cast<std::uint64_t>(v));
      }
      std::sort(consts.begin(), consts.end());
      std::vector<std::uint64_t> want;
      for (auto a : opt.a_values->a)
        for (std::int64_t k = 0; k < (q - 1) / 4; ++k) want.push_back(a);
      std::sort(want.begin(), want.end());
      r.expect(ok && consts == want, [&] { return tag("row structure"); });
    }
  }
  r.domain_size = sc.num_lines();
  r.details["lines_checked"] = lines.size();
  r.details["lines_through_p0"] = through_p0;
  return r;
}

}  // namespace clq
