#pragma once

// End-to-end construction: field, quadric, orbits, tight sets, and (on
// request) the PG(3,q) side with the transferred line classes.

#include <cstdint>
#include <memory>
#include <string>

#include "clq/field_tower.hpp"
#include "clq/klein_quadric.hpp"
#include "clq/pg3_geometry.hpp"
#include "clq/plucker_frame.hpp"
#include "clq/special_set.hpp"
#include "clq/tightset_builder.hpp"

namespace clq {

struct BuildOptions {
  OmegaSign sign = OmegaSign::minus;
  std::size_t a1 = 0;
  unsigned threads = 1;
  bool lines = true;   // build the PG(3,q) scene and the line classes
  bool planes = true;  // plane incidences in the scene
};

struct Construction {
  BuildOptions options;
  std::unique_ptr<FieldTower> tower;
  SpecialSet S;
  SignPartition partition;
  std::unique_ptr<Quadric> quadric;
  OrbitTable orbits;
  TightSetFamily sets;
  std::unique_ptr<PluckerFrame> frame;
  std::unique_ptr<Pg3Scene> scene;
  KleinMap klein;
  LineClass L1, L2;

  std::uint32_t q() const { return tower->q(); }
  std::uint64_t x() const { return sets.T1.x; }
};

inline void build_line_side(Construction& c) {
  c.frame = std::make_unique<PluckerFrame>(*c.tower);
  c.scene = std::make_unique<Pg3Scene>(c.frame->subfield(), c.options.planes);
  c.klein = build_klein_map(*c.quadric, *c.frame, *c.scene);
  c.L1 = transfer(c.klein, c.sets.T1.points, "L1", c.sets.T1.x);
  c.L2 = transfer(c.klein, c.sets.T2.points, "L2", c.sets.T2.x);
}

inline std::unique_ptr<Construction> construct(std::uint32_t p, std::uint32_t h, const BuildOptions& opt = {}) {
  auto c = std::make_unique<Construction>();
  c->options = opt;
  TowerOptions topt;
  topt.omega_sign = opt.sign;
  c->tower = std::make_unique<FieldTower>(FieldTower::build(p, h, topt));
  require_admissible(*c->tower);
  c->S = build_special_set(*c->tower);
  c->partition = build_sign_partition(*c->tower, c->S, opt.a1);
  c->quadric = std::make_unique<Quadric>(*c->tower);
  c->orbits = compute_orbits(*c->quadric, c->S, OrbitGroup::full_G);
  c->sets = build_tight_sets(*c->tower, c->S, c->partition, c->orbits);
  if (opt.lines) build_line_side(*c);
  return c;
}

}  // namespace clq
