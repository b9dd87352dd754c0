#include <gtest/gtest.h>

#include <map>
#include <random>

#include "clq/construction.hpp"
#include "clq/verifier.hpp"
#include "support/oracle.hpp"

using namespace clq;

namespace {

oracle::V4 v4(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

const Construction& built(std::uint32_t q) {
  static std::map<std::uint32_t, std::unique_ptr<Construction>> cache;
  auto& c = cache[q];
  if (!c) c = q == 9 ? construct(3, 2) : construct(q, 1);
  return *c;
}

std::pair<oracle::V4, oracle::V4> span(const Pg3Scene& sc, std::uint32_t L) {
  const auto b = sc.line_basis(L);
  return {v4(b[0]), v4(b[1])};
}

PointOrbits orbits_of(const Construction& c) {
  const Permutation gc = c.quadric->permutation(IsometryMap::c()), gz = c.quadric->permutation(IsometryMap::z());
  return compute_point_orbits(*c.scene, c.klein,
                              {induced_point_permutation(*c.scene, c.klein, gc), induced_point_permutation(*c.scene, c.klein, gz)});
}

// ---- Cameron-Liebler certificate at q=5 ----

TEST(ClOracle, LineIntersectionsByRank) {
  const auto& c = built(5);
  const oracle::Tower ref(5, 1, c.tower->polynomial());
  const oracle::SmallField F(ref);
  const auto& sc = *c.scene;
  std::vector<std::pair<oracle::V4, oracle::V4>> L1;
  for (auto l : c.L1.lines) L1.push_back(span(sc, l));
  ASSERT_EQ(L1.size(), 372u);
  std::map<int, int> off, on;
  for (std::uint32_t l = 0; l < sc.num_lines(); ++l) {
    const auto s = span(sc, l);
    int meet = 0;
    for (std::size_t k = 0; k < L1.size(); ++k)
      if (c.L1.lines[k] != l && oracle::lines_meet(F, s, L1[k])) ++meet;
    ++(c.L1.contains(l) ? on : off)[meet];
  }
  EXPECT_EQ(off, (std::map<int, int>{{72, 806 - 372}}));
  EXPECT_EQ(on, (std::map<int, int>{{96, 372}}));
  EXPECT_TRUE(verify_cl_line_counts(sc, c.L1).pass());
  EXPECT_TRUE(verify_cl_line_counts(sc, c.L2).pass());
}

TEST(ClOracle, SpreadsFromQuadraticExtension) {
  // the regular spread from GF(25) = F_5[t]/(t^2 - 2), built without the scene
  const auto& c = built(5);
  const oracle::Tower ref(5, 1, c.tower->polynomial());
  const oracle::SmallField F(ref);
  const oracle::PolyField K(5, {3, 0, 1});  // t^2 + 3 = t^2 - 2
  ASSERT_EQ(K.mul(5, 5), 2u);               // irreducible: 2 is a nonsquare mod 5
  auto vec = [&](std::uint32_t a, std::uint32_t b) -> oracle::V4 { return {a % 5, a / 5, b % 5, b / 5}; };
  std::vector<std::pair<oracle::V4, oracle::V4>> spread;
  for (std::uint32_t b = 0; b < 25; ++b) spread.push_back({vec(1, b), vec(5, K.mul(5, b))});
  spread.push_back({vec(0, 1), vec(0, 5)});
  for (std::size_t i = 0; i < spread.size(); ++i)
    for (std::size_t j = i + 1; j < spread.size(); ++j) ASSERT_FALSE(oracle::lines_meet(F, spread[i], spread[j]));

  std::vector<std::pair<oracle::V4, oracle::V4>> L1;
  for (auto l : c.L1.lines) L1.push_back(span(*c.scene, l));
  auto hits = [&](const std::vector<std::pair<oracle::V4, oracle::V4>>& S) {
    int h = 0;
    for (const auto& s : S)
      for (const auto& l : L1) h += oracle::rank(F, {s.first, s.second, l.first, l.second}) == 2;
    return h;
  };
  EXPECT_EQ(hits(spread), 12);
  std::mt19937 rng(17);
  for (int k = 0; k < 12; ++k) {
    std::array<oracle::V4, 4> A;
    do {
      for (auto& row : A)
        for (auto& x : row) x = rng() % 5;
    } while (oracle::rank(F, {A[0], A[1], A[2], A[3]}) < 4);
    auto img = spread;
    for (auto& s : img) s = {oracle::apply(F, A, s.first), oracle::apply(F, A, s.second)};
    EXPECT_EQ(hits(img), 12) << k;
  }
}

TEST(ClChecks, FullSuiteAtQ5) {
  const auto& c = built(5);
  for (const LineClass* L : {&c.L1, &c.L2}) {
    const auto reports = verify_cameron_liebler(*c.scene, *L);
    ASSERT_EQ(reports.size(), 4u);
    for (const auto& r : reports) EXPECT_TRUE(r.pass()) << r.name;
    EXPECT_EQ(reports[2].scope, "exhaustive") << "pencils";
    EXPECT_EQ(reports[3].details["valid_spreads"], 101);
  }
}

TEST(ClChecks, StarIsAClassWithParameterOne) {
  const auto& c = built(5);
  const auto star = c.scene->point_lines(c.klein.p0);
  const auto lc = make_line_class("star", 1, {star.begin(), star.end()}, c.scene->num_lines());
  for (const auto& r : verify_cameron_liebler(*c.scene, lc)) EXPECT_TRUE(r.pass()) << r.name;
  const auto wrong = make_line_class("star", 2, {star.begin(), star.end()}, c.scene->num_lines());
  EXPECT_FALSE(all_pass(verify_cameron_liebler(*c.scene, wrong)));
}

// ---- a-values and patterns ----

TEST(AValues, Q5ByRankStarCounts) {
  const auto& c = built(5);
  const oracle::Tower ref(5, 1, c.tower->polynomial());
  const oracle::SmallField F(ref);
  const auto& sc = *c.scene;
  std::vector<std::pair<oracle::V4, oracle::V4>> L1;
  for (auto l : c.L1.lines) L1.push_back(span(sc, l));
  std::map<std::uint32_t, int> hist;
  for (std::uint32_t P = 0; P < sc.num_points(); ++P) {
    if (P == c.klein.p0 || sc.incident(P, c.klein.pi)) continue;
    const auto v = v4(sc.point_vec(P));
    std::uint32_t star = 0;
    for (const auto& l : L1) star += oracle::point_on_line(F, v, l);
    ASSERT_EQ(star % 6, 0u);
    ++hist[star / 6];
  }
  EXPECT_EQ(hist, (std::map<std::uint32_t, int>{{1, 31}, {2, 31}, {3, 31}, {4, 31}}));

  CheckReport r;
  const auto av = extract_a_values(sc, c.L1, orbits_of(c), &r);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(av.a, (std::array<std::uint64_t, 4>{1, 2, 3, 4}));
}

TEST(AValues, Q9) {
  const auto& c = built(9);
  const auto po = orbits_of(c);
  EXPECT_TRUE(verify_point_orbits(*c.scene, c.klein, po).pass());
  CheckReport r;
  const auto av = extract_a_values(*c.scene, c.L1, po, &r);
  EXPECT_TRUE(r.pass()) << (r.failures.empty() ? "" : r.failures[0]);
  EXPECT_EQ(av.a, (std::array<std::uint64_t, 4>{3, 3, 6, 6}));
  EXPECT_EQ(av.a[0] * (9 - av.a[0]) + av.a[1] * (9 - av.a[1]), 9u * 8 / 2);
}

TEST(Patterns, EveryLineAtQ5) {
  const auto& c = built(5);
  const auto po = orbits_of(c);
  const auto av = extract_a_values(*c.scene, c.L1, po);
  PatternOptions p;
  p.a_values = &av;
  p.p0 = c.klein.p0;
  p.pi = c.klein.pi;
  for (const LineClass* L : {&c.L1, &c.L2}) {
    const auto r = verify_pattern_props(*c.scene, *L, p);
    EXPECT_TRUE(r.pass()) << (r.failures.empty() ? "" : r.failures[0]);
    EXPECT_EQ(r.scope, "exhaustive");
    EXPECT_EQ(r.details["lines_through_p0"], 31);
  }
}

TEST(Patterns, EmptyClassGivesZeroPattern) {
  const auto& c = built(5);
  const auto empty = make_line_class("empty", 0, {}, c.scene->num_lines());
  const auto pm = compute_pattern(*c.scene, empty, 17);
  for (const auto& row : pm.t)
    for (auto v : row) EXPECT_EQ(v, 0);
  EXPECT_TRUE(verify_pattern_props(*c.scene, empty).pass());
}

TEST(Patterns, LineThroughP0AtQ9) {
  const auto& c = built(9);
  const auto L = c.scene->point_lines(c.klein.p0)[5];
  const auto pm = compute_pattern(*c.scene, c.L1, L);
  std::multiset<std::int64_t> rows;
  for (const auto& row : pm.t) {
    for (auto v : row) EXPECT_EQ(v, row[0]);
    rows.insert(row[0]);
  }
  // p0, the point on pi, then each a-value (q-1)/4 = 2 times
  EXPECT_EQ(rows, (std::multiset<std::int64_t>{0, 4, 3, 3, 3, 3, 6, 6, 6, 6}));
}

// ---- tactical decomposition and the affine sets at q=9 ----

TEST(Decomposition, TablesAtE1) {
  const auto& c = built(9);
  const auto d = verify_tactical_decomposition(*c.scene, c.klein, c.L1, c.L2);
  EXPECT_TRUE(d.report.pass()) << (d.report.failures.empty() ? "" : d.report.failures[0]);
  // rows p0, pi, P1, P2; columns star(p0), line(pi), L1, L2
  const Table4 lpp{{{91, 0, 0, 0}, {1, 10, 40, 40}, {1, 0, 30, 60}, {1, 0, 60, 30}}};
  const Table4 ppl{{{1, 0, 0, 0}, {1, 10, 1, 1}, {4, 0, 3, 6}, {4, 0, 6, 3}}};
  EXPECT_EQ(d.lines_per_point, lpp);
  EXPECT_EQ(d.points_per_line, ppl);
  std::array<std::size_t, 4> pts{}, lines{};
  for (auto k : d.point_class) ++pts[k];
  for (auto k : d.line_class) ++lines[k];
  EXPECT_EQ(pts, (std::array<std::size_t, 4>{1, 91, 364, 364}));
  EXPECT_EQ(lines, (std::array<std::size_t, 4>{91, 91, 3640, 3640}));
}

TEST(Decomposition, RejectsOtherOrders) {
  const auto& c = built(5);
  EXPECT_THROW(verify_tactical_decomposition(*c.scene, c.klein, c.L1, c.L2), Error);
}

TEST(Affine, TypeAndBothRootsOfTheQuadratic) {
  const auto& c = built(9);
  const auto d = verify_tactical_decomposition(*c.scene, c.klein, c.L1, c.L2);
  const auto r = verify_affine_sets(*c.scene, c.klein, d);
  EXPECT_TRUE(r.pass()) << (r.failures.empty() ? "" : r.failures[0]);
  EXPECT_EQ(r.details["planes"], 728);
  EXPECT_EQ(r.details["type"], nlohmann::json({3, 6}));
  // half the planes give k = 36, the other half the complementary root 45
  EXPECT_EQ(r.details["size_counts"], nlohmann::json({{"36", 364}, {"45", 364}}));
  for (std::int64_t k : {36, 45}) EXPECT_EQ(k * k - k * (9 * 8 + 9) + 3 * 6 * 9 * 10, 0);
}

TEST(Affine, OnePlaneByHand) {
  const auto& c = built(9);
  const auto& sc = *c.scene;
  const auto d = verify_tactical_decomposition(sc, c.klein, c.L1, c.L2);
  std::uint32_t tau = 0;
  while (tau == c.klein.pi || sc.incident(c.klein.p0, tau)) ++tau;
  const auto a = extract_affine_set(sc, c.klein, d, tau);
  // count P1 points on each line of tau off pi, straight from the point classes
  std::map<int, int> sizes;
  int affine = 0;
  for (auto l : sc.plane_lines(tau)) {
    const auto pts = sc.line_points(l);
    bool at_inf = true;
    for (auto P : pts) at_inf = at_inf && sc.incident(P, c.klein.pi);
    if (at_inf) continue;
    ++affine;
    int k = 0;
    for (auto P : pts) k += d.point_class[P] == 2;
    ++sizes[k];
  }
  EXPECT_EQ(affine, 90);
  ASSERT_EQ(sizes.size(), 2u);
  EXPECT_EQ(sizes.begin()->first, 3);
  EXPECT_EQ(sizes.rbegin()->first, 6);
  EXPECT_EQ(a.points.size() + a.complement, 81u);
  EXPECT_THROW(extract_affine_set(sc, c.klein, d, c.klein.pi), Error);
}

// ---- stabilizer and negative controls ----

TEST(Stabilizer, OrdersAt5And9) {
  for (auto [q, order] : {std::pair{5u, 186u}, std::pair{9u, 1092u}}) {
    const auto& c = built(q);
    const auto reports = verify_stabilizer(*c.quadric, c.sets);
    ASSERT_EQ(reports.size(), 2u);
    EXPECT_TRUE(reports[0].pass()) << (reports[0].failures.empty() ? "" : reports[0].failures[0]);
    EXPECT_EQ(reports[1].details["order"], order);
    EXPECT_TRUE(reports[1].pass());
  }
}

TEST(Stabilizer, OSwapsGeneratorSystems) {
  const auto& c = built(5);
  const auto o = c.quadric->permutation(IsometryMap::o());
  std::vector<std::uint32_t> pi1, pi2;
  for (std::uint32_t i = 0; i < c.quadric->size(); ++i) {
    if (c.quadric->in_pi1(i)) pi1.push_back(i);
    if (c.quadric->in_pi2(i)) pi2.push_back(i);
  }
  EXPECT_TRUE(maps_onto(o, pi1, pi2));
  EXPECT_FALSE(maps_onto(o, c.sets.T1.points, c.sets.T2.points));
}

TEST(NegativeControls, RandomSetsFail) {
  for (std::uint32_t q : {5u, 9u}) {
    const auto& c = built(q);
    NegativeControlOptions n;
    n.seed = 7;
    n.eigenvector = q == 5;
    const auto r = verify_negative_controls(*c.quadric, *c.scene, c.klein, c.sets.T1.points.size(), c.sets.T1.x, n);
    EXPECT_TRUE(r.pass()) << (r.failures.empty() ? "" : r.failures[0]);
  }
  const auto& c = built(5);
  const auto pts = random_point_set(*c.quadric, 372, 3);
  EXPECT_EQ(pts.size(), 372u);
  EXPECT_EQ(pts, random_point_set(*c.quadric, 372, 3));
}

TEST(NegativeControls, ChecksAreNotVacuous) {
  const auto& c = built(5);
  // T1 with one point swapped for one outside
  auto pts = c.sets.T1.points;
  const auto in = membership(c.quadric->size(), pts);
  std::uint32_t out = 0;
  while (in[out] || c.quadric->in_pi1(out) || c.quadric->in_pi2(out)) ++out;
  pts[0] = out;
  std::sort(pts.begin(), pts.end());
  EXPECT_FALSE(verify_tight_set(*c.quadric, pts, 12).pass());
  const auto lc = transfer(c.klein, pts, "perturbed", 12);
  EXPECT_FALSE(verify_cl_line_counts(*c.scene, lc).pass());
  EXPECT_FALSE(verify_cl_spreads(*c.scene, lc, 20).pass());
}

}  // namespace
