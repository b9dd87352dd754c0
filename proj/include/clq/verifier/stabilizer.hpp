#pragma once

// The maps c, z, e, o as a stabilizer of T1 and T2, and the order of the
// group they generate.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "clq/klein_quadric.hpp"
#include "clq/report.hpp"
#include "clq/tightset_builder.hpp"

namespace clq {

inline bool maps_onto(const Permutation& g, const std::vector<std::uint32_t>& from, const std::vector<std::uint32_t>& to) {
  std::vector<std::uint32_t> img;
  img.reserve(from.size());
  for (auto i : from) img.push_back(g[i]);
  std::sort(img.begin(), img.end());
  return img == to;
}

/// Breadth-first closure over full permutations; 0 when `cap` is exceeded.
inline std::uint64_t group_order(const std::vector<Permutation>& gens, std::uint64_t cap = 1'000'000) {
  if (gens.empty()) return 1;
  Permutation id(gens[0].size());
  for (std::uint32_t i = 0; i < id.size(); ++i) id[i] = i;
  std::set<Permutation> seen{id};
  std::vector<Permutation> queue{id};
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (const auto& g : gens) {
      Permutation next(id.size());
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = g[queue[h][i]];
      if (seen.insert(next).second) {
        if (seen.size() > cap) return 0;
        queue.push_back(std::move(next));
      }
    }
  return seen.size();
}

struct StabilizerOptions {
  bool group_order = true;
  std::uint64_t cap = 1'000'000;
};

inline std::vector<CheckReport> verify_stabilizer(const Quadric& Qd, const TightSetFamily& fam, const StabilizerOptions& opt = {}) {
  std::vector<CheckReport> out;
  const Permutation c = Qd.permutation(IsometryMap::c()), z = Qd.permutation(IsometryMap::z()),
                    e = Qd.permutation(IsometryMap::e()), o = Qd.permutation(IsometryMap::o());
  {
    CheckReport r("stabilizer_maps");
    const std::pair<const char*, const Permutation*> named[] = {{"c", &c}, {"z", &z}, {"e", &e}, {"o", &o}};
    for (auto [name, g] : named) {
      r.expect(maps_onto(*g, fam.T1.points, fam.T1.points), [&] { return std::string(name) + " moves T1"; });
      r.expect(maps_onto(*g, fam.T2.points, fam.T2.points), [&] { return std::string(name) + " moves T2"; });
    }
    const Permutation w2 = Qd.permutation(IsometryMap::scale_v(2)), w1 = Qd.permutation(IsometryMap::scale_v(1));
    r.expect(maps_onto(w2, fam.T1.points, fam.T2.points) && maps_onto(w2, fam.T2.points, fam.T1.points),
             [] { return "omega^2 does not swap T1 and T2"; });
    r.expect(maps_onto(w1, fam.T1prime.points, fam.T1.points), [] { return "omega does not map T1' to T1"; });
    r.expect(maps_onto(w1, fam.T2prime.points, fam.T2.points), [] { return "omega does not map T2' to T2"; });
    std::vector<std::uint32_t> pi1, pi2;
    for (std::uint32_t i = 0; i < Qd.size(); ++i) {
      if (Qd.in_pi1(i)) pi1.push_back(i);
      if (Qd.in_pi2(i)) pi2.push_back(i);
    }
    r.expect(maps_onto(o, pi1, pi2), [] { return "o does not exchange pi1 and pi2"; });
    r.expect(maps_onto(c, pi1, pi1) && maps_onto(z, pi1, pi1) && maps_onto(e, pi1, pi1),
             [] { return "c, z, e do not fix pi1"; });
    out.push_back(r);
  }
  if (opt.group_order) {
    CheckReport r("stabilizer_order");
    const std::uint64_t q = Qd.tower().q();
    const std::uint64_t want = 3 * (q - 1) / 2 * Qd.plane_order();
    const std::uint64_t got = group_order({c, z, e, o}, opt.cap);
    r.expect(got == want, [&] { return "group order " + std::to_string(got) + ", expected " + std::to_string(want); });
    r.details["order"] = got;
    r.details["expected"] = want;
    out.push_back(r);
  }
  return out;
}

}  // namespace clq
