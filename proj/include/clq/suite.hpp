#pragma once

// Runs the verifier families over a Construction. Groups are selected by
// name; heavy checks (pairwise eigenvector counts, all Gauss sums, the
// permutation-group closure) are skipped above desk scale unless the group
// is requested explicitly.

#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clq/character_engine.hpp"
#include "clq/construction.hpp"
#include "clq/error.hpp"
#include "clq/field_identities.hpp"
#include "clq/report.hpp"
#include "clq/verifier.hpp"

namespace clq {

inline const std::vector<std::string>& check_group_names() {
  static const std::vector<std::string> names{"field",  "characters", "quadric",  "matrix",        "assembly",
                                              "tight",  "eigen",      "klein",    "cl",            "patterns",
                                              "decomposition", "stabilizer", "negative"};
  return names;
}

struct SuiteOptions {
  std::set<std::string> groups;  // empty: every group, scale-aware
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Quadric size up to which pairwise and closure checks run by default.
  std::uint64_t pairwise_limit = 20'000;
  /// |E| up to which every Gauss sum is evaluated by default.
  std::uint64_t gauss_limit = 5'000;
};

/// Comma-separated list, "all" or empty for everything.
inline std::set<std::string> parse_check_list(const std::string& list) {
  std::set<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item == "all") continue;
    bool known = false;
    for (const auto& n : check_group_names()) known = known || n == item;
    if (!known) throw Error(ErrorCode::BadFlag, "unknown check group '" + item + "'");
    out.insert(item);
  }
  return out;
}

namespace detail {

inline void append(std::vector<CheckReport>& out, std::vector<CheckReport> more) {
  for (auto& r : more) out.push_back(std::move(r));
}

template <typename F>
void timed(std::vector<CheckReport>& out, F&& f) {
  Stopwatch sw;
  const std::size_t before = out.size();
  f();
  const auto ms = sw.elapsed_ms();
  // the group total is charged to its first report
  if (out.size() > before && out[before].elapsed_ms == 0) out[before].elapsed_ms = ms;
}

}  // namespace detail

inline std::vector<CheckReport> run_suite(const Construction& c, const SuiteOptions& opt = {}) {
  const bool everything = opt.groups.empty();
  auto wanted = [&](const char* g) { return everything || opt.groups.count(g) > 0; };
  auto forced = [&](const char* g) { return opt.groups.count(g) > 0; };
  const FieldTower& t = *c.tower;
  const Quadric& Qd = *c.quadric;
  const bool small = Qd.size() <= opt.pairwise_limit;
  const bool has_lines = c.scene != nullptr;
  std::vector<CheckReport> out;

  if (wanted("field"))
    detail::timed(out, [&] {
      detail::append(out, verify_field_identities(t, 1u << 20, opt.seed));
      detail::append(out, verify_cyclic_plane_model(t));
    });
  if (wanted("characters"))
    detail::timed(out, [&] {
      detail::append(out, verify_kappa_theorem(t, opt.threads));
      if (t.size() <= opt.gauss_limit || forced("characters")) {
        GaussSuiteOptions g;
        g.seed = opt.seed;
        detail::append(out, verify_gauss_identities(t, g));
      }
    });
  if (wanted("quadric"))
    detail::timed(out, [&] {
      detail::append(out, verify_quadric_model(Qd, opt.threads));
      if (c.frame) out.push_back(verify_plucker_frame(*c.frame, 1000, opt.seed));
    });
  if (wanted("matrix"))
    detail::timed(out, [&] {
      out.push_back(verify_sign_partition(t, c.S, c.partition));
      const auto m = build_orbit_sum_matrices(t, c.S, opt.threads);
      detail::append(out, verify_matrix_machinery(t, c.S, c.partition, m));
      out.push_back(verify_tacticality(Qd, c.orbits, m, opt.threads));
    });
  if (wanted("assembly")) detail::timed(out, [&] { detail::append(out, verify_assembly(Qd, c.S, c.orbits, c.sets)); });
  if (wanted("tight"))
    detail::timed(out, [&] {
      for (const TightSet* ts : {&c.sets.T1, &c.sets.T2, &c.sets.T1prime, &c.sets.T2prime})
        out.push_back(verify_tight_set(Qd, ts->points, ts->x, opt.threads, KernelChoice::automatic,
                                       std::string("tight_set.") + to_string(ts->label)));
    });
  if (wanted("eigen") && (small || forced("eigen")))
    detail::timed(out, [&] {
      for (const TightSet* ts : {&c.sets.T1, &c.sets.T2}) {
        auto rs = verify_eigenvector_criteria(Qd, ts->points, ts->x, opt.threads);
        for (auto& r : rs) r.name = std::string(to_string(ts->label)) + "." + r.name;
        detail::append(out, std::move(rs));
      }
    });
  if (has_lines && wanted("klein"))
    detail::timed(out, [&] { detail::append(out, verify_klein_map(Qd, *c.scene, c.klein, 10'000, opt.seed)); });
  if (has_lines && wanted("cl"))
    detail::timed(out, [&] {
      ClOptions cl;
      cl.seed = opt.seed;
      cl.threads = opt.threads;
      detail::append(out, verify_cameron_liebler(*c.scene, c.L1, cl));
      detail::append(out, verify_cameron_liebler(*c.scene, c.L2, cl));
    });
  if (has_lines && c.scene->has_planes() && wanted("patterns"))
    detail::timed(out, [&] {
      const Permutation gc = Qd.permutation(IsometryMap::c()), gz = Qd.permutation(IsometryMap::z());
      const auto po = compute_point_orbits(*c.scene, c.klein,
                                           {induced_point_permutation(*c.scene, c.klein, gc),
                                            induced_point_permutation(*c.scene, c.klein, gz)});
      out.push_back(verify_point_orbits(*c.scene, c.klein, po));
      CheckReport ar;
      const AValues av = extract_a_values(*c.scene, c.L1, po, &ar);
      out.push_back(ar);
      PatternOptions p;
      p.seed = opt.seed;
      p.a_values = &av;
      p.p0 = c.klein.p0;
      p.pi = c.klein.pi;
      for (const LineClass* L : {&c.L1, &c.L2}) {
        auto r = verify_pattern_props(*c.scene, *L, p);
        r.name = L->label + "." + r.name;
        out.push_back(std::move(r));
      }
    });
  if (has_lines && c.scene->has_planes() && square_power_of_three(c.q()) && wanted("decomposition"))
    detail::timed(out, [&] {
      const auto d = verify_tactical_decomposition(*c.scene, c.klein, c.L1, c.L2);
      out.push_back(d.report);
      out.push_back(verify_affine_sets(*c.scene, c.klein, d));
    });
  if (wanted("stabilizer"))
    detail::timed(out, [&] {
      StabilizerOptions s;
      s.group_order = small || forced("stabilizer");
      detail::append(out, verify_stabilizer(Qd, c.sets, s));
    });
  if (has_lines && wanted("negative"))
    detail::timed(out, [&] {
      NegativeControlOptions n;
      n.seed = opt.seed;
      n.threads = opt.threads;
      n.eigenvector = small || forced("negative");
      out.push_back(verify_negative_controls(Qd, *c.scene, c.klein, c.sets.T1.points.size(), c.x(), n));
    });
  return out;
}

}  // namespace clq
