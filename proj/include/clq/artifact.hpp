#pragma once

// Artifact files: one JSON document per construction. Keys are emitted in
// sorted order (nlohmann::json objects are std::map backed) and timings are
// left out, so the same configuration always produces the same bytes.
//
// Quadric points are stored as pairs of E element indices, lines by their
// rank in the PG(3,q) line ordering; the tower block carries the defining
// polynomial those indices refer to.

#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clq/construction.hpp"
#include "clq/error.hpp"
#include "clq/report.hpp"

namespace clq {

inline constexpr const char* kArtifactFormat = "1";

struct ArtifactConfig {
  std::uint32_t p = 0, h = 0;
  OmegaSign sign = OmegaSign::minus;
  std::size_t a1 = 0;
  std::uint64_t seed = 1;
};

inline nlohmann::json tower_block(const FieldTower& t) {
  // omega for the other convention, from the same alpha
  const std::uint32_t other = (t.order() - t.omega_log()) % t.order();
  nlohmann::json omega{{to_string(t.omega_sign()), t.omega_log()},
                       {to_string(t.omega_sign() == OmegaSign::minus ? OmegaSign::plus : OmegaSign::minus), other}};
  return {{"p", t.p()},
          {"h", t.h()},
          {"q", t.q()},
          {"polynomial", t.polynomial()},
          {"element_encoding", "base-p digits of the coefficient vector modulo the polynomial, lowest first"},
          {"omega_log", omega},
          {"constructed_sign", to_string(t.omega_sign())}};
}

inline nlohmann::json tight_set_block(const Quadric& Qd, const TightSet& ts) {
  nlohmann::json pts = nlohmann::json::array();
  for (auto i : ts.points) {
    const auto& p = Qd.point(i);
    pts.push_back({p.u.index, p.v.index});
  }
  nlohmann::json keys = nlohmann::json::array();
  for (auto [s, i] : ts.orbit_keys) keys.push_back({s, i});
  return {{"label", to_string(ts.label)}, {"x", ts.x}, {"size", ts.points.size()}, {"orbit_keys", keys}, {"points", pts}};
}

inline nlohmann::json artifact_json(const Construction& c, const ArtifactConfig& cfg, const std::vector<CheckReport>& verdicts) {
  nlohmann::json j;
  j["format_version"] = kArtifactFormat;
  j["config"] = {{"p", cfg.p}, {"h", cfg.h}, {"sign", to_string(cfg.sign)}, {"a1", cfg.a1}, {"seed", cfg.seed}};
  j["tower"] = tower_block(*c.tower);
  nlohmann::json S = nlohmann::json::array();
  for (auto a : c.S.elements) S.push_back(a.index);
  j["special_set"] = S;
  j["partition"] = {{"a1", c.partition.a1}, {"X1", c.partition.X1}, {"X2", c.partition.X2}};
  j["tight_sets"] = nlohmann::json::array();
  for (const TightSet* ts : {&c.sets.T1, &c.sets.T2, &c.sets.T1prime, &c.sets.T2prime})
    j["tight_sets"].push_back(tight_set_block(*c.quadric, *ts));
  if (c.scene) {
    j["scene"] = {{"points", c.scene->num_points()},
                  {"lines", c.scene->num_lines()},
                  {"planes", c.scene->has_planes() ? c.scene->num_planes() : 0},
                  {"line_order", "reduced row echelon form, pivot pairs 01,02,03,12,13,23, free entries most significant first"},
                  {"p0", c.klein.p0},
                  {"pi", c.klein.pi},
                  {"families_swapped", c.klein.swapped}};
    j["line_classes"] = nlohmann::json::array();
    for (const LineClass* L : {&c.L1, &c.L2})
      j["line_classes"].push_back({{"label", L->label}, {"x", L->x}, {"size", L->size()}, {"lines", L->lines}});
  }
  nlohmann::json v = nlohmann::json::array();
  for (const auto& r : verdicts) {
    auto vj = to_verdict(r, c.q(), false);
    vj["seed"] = cfg.seed;
    v.push_back(std::move(vj));
  }
  j["verdicts"] = v;
  return j;
}

inline std::string dump_artifact(const nlohmann::json& j) { return j.dump() + "\n"; }

namespace detail {

[[noreturn]] inline void bad_artifact(const std::string& what) { throw Error(ErrorCode::BadArtifact, what); }

inline const nlohmann::json& need(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_artifact(std::string("missing '") + key + "'");
  return j.at(key);
}

inline TightLabel label_from(const std::string& s) {
  for (auto l : {TightLabel::T1, TightLabel::T2, TightLabel::T1prime, TightLabel::T2prime})
    if (s == to_string(l)) return l;
  bad_artifact("unknown tight set label '" + s + "'");
}

}  // namespace detail

inline ArtifactConfig artifact_config(const nlohmann::json& j) {
  if (detail::need(j, "format_version") != kArtifactFormat) detail::bad_artifact("unsupported format_version");
  const auto& c = detail::need(j, "config");
  ArtifactConfig cfg;
  try {
    cfg.p = c.at("p").get<std::uint32_t>();
    cfg.h = c.at("h").get<std::uint32_t>();
    const auto sign = c.at("sign").get<std::string>();
    if (sign != "minus" && sign != "plus") detail::bad_artifact("sign must be minus or plus");
    cfg.sign = sign == "plus" ? OmegaSign::plus : OmegaSign::minus;
    cfg.a1 = c.at("a1").get<std::size_t>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    detail::bad_artifact(std::string("config: ") + e.what());
  }
  return cfg;
}

/// Rebuilds field, quadric, orbits and the PG(3,q) scene from the config and
/// takes the tight sets and line classes from the file.
inline std::unique_ptr<Construction> load_artifact(const nlohmann::json& j, bool planes = true) {
  const ArtifactConfig cfg = artifact_config(j);
  auto c = std::make_unique<Construction>();
  c->options.sign = cfg.sign;
  c->options.a1 = cfg.a1;
  c->options.planes = planes;
  TowerOptions topt;
  topt.omega_sign = cfg.sign;
  c->tower = std::make_unique<FieldTower>(FieldTower::build(cfg.p, cfg.h, topt));
  require_admissible(*c->tower);
  const FieldTower& t = *c->tower;
  try {
    if (detail::need(j, "tower").at("polynomial").get<std::vector<std::uint32_t>>() != t.polynomial())
      detail::bad_artifact("defining polynomial differs from this build");
    c->S = build_special_set(t);
    c->partition = partition_from(t, c->S, cfg.a1);
    if (j.contains("partition") && j.at("partition").at("X1").get<std::vector<std::uint32_t>>() != c->partition.X1)
      throw Error(ErrorCode::PartitionInconsistent, "recorded X1 differs from the one determined by a1");
    c->quadric = std::make_unique<Quadric>(t);
    c->orbits = compute_orbits(*c->quadric, c->S, OrbitGroup::full_G);

    const auto& sets = detail::need(j, "tight_sets");
    if (!sets.is_array() || sets.size() != 4) detail::bad_artifact("expected four tight sets");
    for (const auto& b : sets) {
      TightSet ts;
      ts.label = detail::label_from(b.at("label").get<std::string>());
      ts.x = b.at("x").get<std::uint64_t>();
      ts.a1 = cfg.a1;
      for (const auto& k : b.at("orbit_keys")) ts.orbit_keys.emplace_back(k.at(0).get<std::uint32_t>(), k.at(1).get<std::uint32_t>());
      for (const auto& pt : b.at("points")) {
        const auto u = pt.at(0).get<std::uint32_t>(), v = pt.at(1).get<std::uint32_t>();
        if (u >= t.size() || v >= t.size()) detail::bad_artifact("element index out of range");
        const auto idx = c->quadric->index_of({{u}, {v}});
        if (idx == Quadric::kAbsent)
          throw Error(ErrorCode::NotOnQuadric, "(" + std::to_string(u) + "," + std::to_string(v) + ") is not a canonical quadric point");
        ts.points.push_back(idx);
      }
      std::sort(ts.points.begin(), ts.points.end());
      switch (ts.label) {
        case TightLabel::T1: c->sets.T1 = std::move(ts); break;
        case TightLabel::T2: c->sets.T2 = std::move(ts); break;
        case TightLabel::T1prime: c->sets.T1prime = std::move(ts); break;
        case TightLabel::T2prime: c->sets.T2prime = std::move(ts); break;
      }
    }
    if (j.contains("line_classes")) {
      c->frame = std::make_unique<PluckerFrame>(t);
      c->scene = std::make_unique<Pg3Scene>(c->frame->subfield(), planes);
      c->klein = build_klein_map(*c->quadric, *c->frame, *c->scene);
      const auto& lc = j.at("line_classes");
      if (!lc.is_array() || lc.size() != 2) detail::bad_artifact("expected two line classes");
      LineClass* dst[2] = {&c->L1, &c->L2};
      for (std::size_t k = 0; k < 2; ++k) {
        auto lines = lc[k].at("lines").get<std::vector<std::uint32_t>>();
        for (auto l : lines)
          if (l >= c->scene->num_lines()) detail::bad_artifact("line id out of range");
        *dst[k] = make_line_class(lc[k].at("label").get<std::string>(), lc[k].at("x").get<std::uint64_t>(), std::move(lines),
                                  c->scene->num_lines());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    detail::bad_artifact(e.what());
  }
  return c;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadArtifact, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadArtifact, path + ": " + e.what());
  }
}

/// Tight sets and line classes of `c` equal those of a fresh construction.
inline CheckReport verify_reproducible(const Construction& c) {
  CheckReport r("artifact_reproducible");
  BuildOptions opt = c.options;
  opt.lines = c.scene != nullptr;
  opt.planes = false;
  const auto fresh = construct(c.tower->p(), c.tower->h(), opt);
  const std::pair<const TightSet*, const TightSet*> sets[] = {{&c.sets.T1, &fresh->sets.T1},
                                                              {&c.sets.T2, &fresh->sets.T2},
                                                              {&c.sets.T1prime, &fresh->sets.T1prime},
                                                              {&c.sets.T2prime, &fresh->sets.T2prime}};
  for (auto [a, b] : sets) {
    r.expect(a->points == b->points, [&] { return std::string(to_string(a->label)) + " points differ"; });
    r.expect(a->orbit_keys == b->orbit_keys, [&] { return std::string(to_string(a->label)) + " orbit keys differ"; });
    r.expect(a->x == b->x, [&] { return std::string(to_string(a->label)) + " parameter differs"; });
  }
  if (c.scene) {
    r.expect(c.L1.lines == fresh->L1.lines, [] { return std::string("L1 differs"); });
    r.expect(c.L2.lines == fresh->L2.lines, [] { return std::string("L2 differs"); });
  }
  return r;
}

}  // namespace clq
