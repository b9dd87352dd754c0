// Acceptance run: one PASS/FAIL line per criterion. Criteria listed with
// --known-fail are still run and printed, but do not affect the exit code.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "clq/character_engine.hpp"
#include "clq/construction.hpp"
#include "clq/verifier.hpp"

using namespace clq;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  Outcome() { note << std::fixed << std::setprecision(3); }

  void need(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
  void need_all(const std::vector<CheckReport>& rs) {
    for (const auto& r : rs) need(r.pass(), r.name + (r.failures.empty() ? "" : " " + r.failures[0]));
  }
};

std::unique_ptr<Construction> build(std::uint32_t p, std::uint32_t h, unsigned threads, bool lines = true, bool planes = true) {
  BuildOptions o;
  o.threads = threads;
  o.lines = lines;
  o.planes = planes;
  return construct(p, h, o);
}

PointOrbits point_orbits(const Construction& c) {
  const Permutation gc = c.quadric->permutation(IsometryMap::c()), gz = c.quadric->permutation(IsometryMap::z());
  return compute_point_orbits(*c.scene, c.klein,
                              {induced_point_permutation(*c.scene, c.klein, gc), induced_point_permutation(*c.scene, c.klein, gz)});
}

std::string range(const nlohmann::json& r) {
  if (!r.is_array()) return "-";
  return r[0] == r[1] ? r[0].dump() : r[0].dump() + ".." + r[1].dump();
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto c = build(5, 1, 1, false);
  std::vector<CheckReport> rs;
  for (const auto* ts : {&c->sets.T1, &c->sets.T2}) rs.push_back(verify_tight_set(*c->quadric, ts->points, ts->x, 1));
  const double secs = seconds_since(t0);
  const auto asm_r = verify_assembly(*c->quadric, c->S, c->orbits, c->sets);
  o.need(c->quadric->size() == 806, "806 points");
  o.need(c->sets.T1.points.size() == 372 && c->sets.T2.points.size() == 372, "|T1|=|T2|=372");
  o.need(c->sets.T1.x == 12, "x=12");
  o.need_all(rs);
  o.need_all(asm_r);
  for (const auto& r : rs) {
    o.need(r.details["off_count"] == nlohmann::json({72, 72}), "off count 72");
    o.need(r.details["on_count"] == nlohmann::json({97, 97}), "on count 97");
  }
  o.need(secs < 1.0, "runtime < 1 s");
  o.note << " |T1|=|T2|=" << c->sets.T1.points.size() << ", points=" << c->quadric->size() << ", off=" << range(rs[0].details["off_count"])
         << ", on=" << range(rs[0].details["on_count"]) << ", " << secs << " s (1 thread)";
  return o;
}

Outcome criterion2(unsigned threads) {
  Outcome o;
  const auto t0 = Clock::now();
  const auto c = build(3, 2, threads, false);
  const auto r = verify_tight_set(*c->quadric, c->sets.T1.points, c->sets.T1.x, threads);
  const auto r2 = verify_tight_set(*c->quadric, c->sets.T2.points, c->sets.T2.x, threads);
  const double secs = seconds_since(t0);
  o.need(c->sets.T1.points.size() == 3640, "|T1|=3640");
  o.need(c->sets.T1.x == 40, "x=40");
  o.need(r.domain_size == 7462 && r.scope == "exhaustive", "7462 points exhaustive");
  o.need_all({r, r2});
  o.need(secs < 10.0, "runtime < 10 s");
  o.note << " |T1|=" << c->sets.T1.points.size() << ", x=" << c->sets.T1.x << ", points=" << r.domain_size << ", off=" << range(r.details["off_count"])
         << ", on=" << range(r.details["on_count"]) << ", " << secs << " s";
  return o;
}

Outcome criterion3(unsigned threads) {
  Outcome o;
  const auto c = build(5, 1, threads);
  const auto counts = verify_cl_line_counts(*c->scene, c->L1, threads);
  const auto pencils = verify_cl_pencils(*c->scene, c->L1);
  const auto spreads = verify_cl_spreads(*c->scene, c->L1, 100, 1);
  o.need_all({counts, pencils, spreads});
  o.need(counts.domain_size == 806, "806 lines");
  o.need(counts.details["expected_off"] == 72 && counts.details["expected_on"] == 96, "72 / 96");
  o.need(pencils.scope == "exhaustive", "pencils exhaustive");
  o.need(spreads.details["valid_spreads"] == 101, "regular + 100 images are spreads");
  o.note << " lines=" << counts.domain_size << " (off 72, on 96), pencil pairs " << pencils.checked << " " << pencils.scope
         << ", spreads " << spreads.details["valid_spreads"] << "/101 meet L1 in 12";
  return o;
}

Outcome criterion4(unsigned threads) {
  Outcome o;
  for (auto [p, h] : {std::pair{5u, 1u}, std::pair{3u, 2u}}) {
    const auto t = FieldTower::build(p, h);
    const auto kappa = verify_kappa_theorem(t, threads);
    o.need_all(kappa);
    for (const auto& r : kappa) o.need(r.checked == t.order(), r.name + " exhaustive");
    const auto gauss = verify_gauss_identities(t);
    o.need_all(gauss);
    bool dh = false;
    for (const auto& r : gauss)
      if (r.name == "DavHasse_d2") dh = r.scope == "exhaustive";
    if (t.q() == 5) o.need(dh, "DavHasse d=2 full at q=5");
    o.note << " q=" << t.q() << ": kappa " << t.order() << " cases, " << gauss.size() << " Gauss suites;";
  }
  o.note << " tol 1e-6*p^(3h/2)";
  return o;
}

Outcome criterion5(unsigned threads) {
  Outcome o;
  for (auto [p, h] : {std::pair{5u, 1u}, std::pair{3u, 2u}}) {
    const auto c = build(p, h, threads, false);
    const auto m = build_orbit_sum_matrices(*c->tower, c->S, threads);
    o.need_all(verify_matrix_machinery(*c->tower, c->S, c->partition, m));
    const auto tac = verify_tacticality(*c->quadric, c->orbits, m, threads);
    o.need(tac.pass(), "tacticality q=" + std::to_string(c->q()));
    o.note << " q=" << c->q() << ": B " << m.B.size() << "x" << m.B.size() << ", tacticality " << tac.scope << ";";
  }
  return o;
}

Outcome criterion6(unsigned threads) {
  Outcome o;
  for (auto [p, h, want] : {std::tuple{5u, 1u, std::array<std::uint64_t, 4>{1, 2, 3, 4}},
                            std::tuple{3u, 2u, std::array<std::uint64_t, 4>{3, 3, 6, 6}}}) {
    const auto c = build(p, h, threads);
    CheckReport r;
    const auto av = extract_a_values(*c->scene, c->L1, point_orbits(*c), &r);
    o.need(r.pass(), "a-value identities q=" + std::to_string(c->q()));
    o.need(av.a == want, "a-values q=" + std::to_string(c->q()));
    o.note << " q=" << c->q() << ": {" << av.a[0] << "," << av.a[1] << "," << av.a[2] << "," << av.a[3] << "};";
  }
  return o;
}

Outcome criterion7(const Construction& c9) {
  Outcome o;
  const auto d = verify_tactical_decomposition(*c9.scene, c9.klein, c9.L1, c9.L2);
  o.need(d.report.pass(), "tables");
  o.need(d.lines_per_point[2][2] == 30 && d.lines_per_point[2][3] == 60 && d.lines_per_point[1][2] == 40, "30/60/40");
  o.need(d.points_per_line[2][2] == 3 && d.points_per_line[3][2] == 6, "3/6");
  o.note << " lines-per-point P1:(L1,L2)=(" << d.lines_per_point[2][2] << "," << d.lines_per_point[2][3] << "), pi:L1="
         << d.lines_per_point[1][2] << "; points-per-line L1:(P1,P2)=(" << d.points_per_line[2][2] << "," << d.points_per_line[3][2]
         << "); " << d.report.checked << " constancy checks";
  return o;
}

Outcome criterion8(const Construction& c9) {
  Outcome o;
  const auto d = verify_tactical_decomposition(*c9.scene, c9.klein, c9.L1, c9.L2);
  const auto r = verify_affine_sets(*c9.scene, c9.klein, d);
  o.need(r.pass(), "type (3,6), quadratic, 90 lines per plane");
  // the pinned size: |K| = 36 on every admissible plane
  const auto& sizes = r.details["size_counts"];
  o.need(sizes.size() == 1 && sizes.contains("36"), "|K| = 36 on every plane");
  o.note << " planes=" << r.details["planes"] << ", type " << r.details["type"].dump() << ", |K| histogram " << sizes.dump()
         << " (36 and 45 = 81-36 are both roots of the quadratic)";
  return o;
}

Outcome criterion9(const Construction& c5, const Construction& c9) {
  Outcome o;
  for (auto [c, want] : {std::pair{&c5, 186u}, std::pair{&c9, 1092u}}) {
    const auto rs = verify_stabilizer(*c->quadric, c->sets);
    o.need_all(rs);
    o.need(rs.size() == 2 && rs[1].details["order"] == want, "order " + std::to_string(want));
    o.note << " q=" << c->q() << ": order " << (rs.size() == 2 ? rs[1].details["order"].dump() : "?") << ";";
  }
  return o;
}

Outcome criterion10(const Construction& c5, const Construction& c9, unsigned threads) {
  Outcome o;
  for (const Construction* c : {&c5, &c9}) {
    NegativeControlOptions n;
    n.seed = 1;
    n.threads = threads;
    const auto r = verify_negative_controls(*c->quadric, *c->scene, c->klein, c->sets.T1.points.size(), c->x(), n);
    o.need(r.pass(), r.failures.empty() ? "negative controls" : r.failures[0]);
    o.note << " q=" << c->q() << ": " << n.trials << " seeded point sets and " << n.trials << " line sets all rejected;";
  }
  return o;
}

Outcome criterion11(unsigned threads) {
  Outcome o;
  for (auto [q, limit] : {std::pair{17u, 60.0}, std::pair{29u, 900.0}}) {
    const auto t0 = Clock::now();
    const auto c = build(q, 1, threads, true, false);
    const auto tight = verify_tight_set(*c->quadric, c->sets.T1.points, c->sets.T1.x, threads);
    const auto lines = verify_cl_line_counts(*c->scene, c->L1, threads);
    const double secs = seconds_since(t0);
    o.need(tight.pass() && tight.scope == "exhaustive", "tight set q=" + std::to_string(q));
    o.need(lines.pass() && lines.scope == "exhaustive", "line counts q=" + std::to_string(q));
    o.need(secs < limit, "q=" + std::to_string(q) + " within " + std::to_string(static_cast<int>(limit)) + " s");
    o.note << " q=" << q << ": " << secs << " s (" << tight.domain_size << " points, " << lines.domain_size << " lines);";
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-11"};
  unsigned threads = 1;
  std::vector<int> known;
  bool skip_stretch = false;
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--known-fail", known, "criteria whose FAIL does not change the exit code");
  app.add_flag("--skip-stretch", skip_stretch, "skip criterion 11");
  CLI11_PARSE(app, argc, argv);
  threads = std::max(1u, threads);
  const std::set<int> known_fail(known.begin(), known.end());

  int unexpected = 0;
  auto report = [&](int n, const char* title, auto&& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " [exception: " << e.what() << "]";
    }
    const bool known_bad = !o.pass && known_fail.count(n);
    if (!o.pass && !known_bad) ++unexpected;
    std::printf("criterion %2d: %s  %s:%s%s\n", n, o.pass ? "PASS" : "FAIL", title, o.note.str().c_str(),
                known_bad ? " (known)" : "");
    std::fflush(stdout);
  };

  report(1, "q=5 end-to-end", [] { return criterion1(); });
  report(2, "q=9 end-to-end", [&] { return criterion2(threads); });
  report(3, "Cameron-Liebler certificate q=5", [&] { return criterion3(threads); });
  report(4, "character suites", [&] { return criterion4(threads); });
  report(5, "matrix machinery", [&] { return criterion5(threads); });
  report(6, "a-values", [&] { return criterion6(threads); });
  const auto c5 = build(5, 1, threads);
  const auto c9 = build(3, 2, threads);
  report(7, "tactical decomposition q=9", [&] { return criterion7(*c9); });
  report(8, "affine two-intersection sets q=9", [&] { return criterion8(*c9); });
  report(9, "stabilizer", [&] { return criterion9(*c5, *c9); });
  report(10, "negative controls", [&] { return criterion10(*c5, *c9, threads); });
  if (skip_stretch)
    std::printf("criterion 11: SKIP  performance stretch\n");
  else
    report(11, "performance stretch", [&] { return criterion11(threads); });
  return unexpected == 0 ? 0 : 1;
}
