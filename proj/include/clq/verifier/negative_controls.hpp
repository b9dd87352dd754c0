#pragma once

// Seeded random sets of the same sizes must be rejected by every verifier.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "clq/klein_quadric.hpp"
#include "clq/pg3_geometry.hpp"
#include "clq/report.hpp"
#include "clq/verifier/cl_checks.hpp"
#include "clq/verifier/tight_kernel.hpp"

namespace clq {

/// `size` distinct quadric points off pi1 u pi2.
inline std::vector<std::uint32_t> random_point_set(const Quadric& Qd, std::size_t size, std::uint64_t seed) {
  std::vector<std::uint32_t> pool;
  for (std::uint32_t i = 0; i < Qd.size(); ++i)
    if (!Qd.in_pi1(i) && !Qd.in_pi2(i)) pool.push_back(i);
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(size, pool.size()));
  std::sort(pool.begin(), pool.end());
  return pool;
}

inline std::vector<std::uint32_t> random_line_set(const Pg3Scene& sc, std::size_t size, std::uint64_t seed) {
  std::vector<std::uint32_t> all(sc.num_lines());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(size, all.size()));
  return all;
}

struct NegativeControlOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 3;
  bool eigenvector = true;  // pairwise counts; skip for large q
  unsigned threads = 1;
};

/// Passes when each random set fails the tight-set, eigenvector and CL
/// checks.
inline CheckReport verify_negative_controls(const Quadric& Qd, const Pg3Scene& sc, const KleinMap& km, std::size_t size,
                                            std::uint64_t x, const NegativeControlOptions& opt = {}) {
  CheckReport r("negative_controls");
  ClOptions cl;
  cl.pencils = false;
  cl.random_spreads = 10;
  cl.threads = opt.threads;
  for (std::size_t k = 0; k < opt.trials; ++k) {
    const std::uint64_t seed = opt.seed + k;
    const auto pts = random_point_set(Qd, size, seed);
    r.expect(!verify_tight_set(Qd, pts, x, opt.threads).pass(), [&] { return "random point set " + std::to_string(seed) + " passed as tight"; });
    if (opt.eigenvector) {
      const auto ev = verify_eigenvector_criteria(Qd, pts, x, opt.threads);
      r.expect(!ev[0].pass() && !ev[1].pass(), [&] { return "random point set " + std::to_string(seed) + " passed an eigenvector criterion"; });
    }
    const LineClass image = transfer(km, pts, "random_image", x);
    r.expect(!all_pass(verify_cameron_liebler(sc, image, cl)), [&] { return "image of random set " + std::to_string(seed) + " passed as CL"; });
    const LineClass lines = make_line_class("random_lines", x, random_line_set(sc, size, seed), sc.num_lines());
    r.expect(!all_pass(verify_cameron_liebler(sc, lines, cl)), [&] { return "random line set " + std::to_string(seed) + " passed as CL"; });
  }
  r.details["trials"] = opt.trials;
  r.details["seed"] = opt.seed;
  r.scope = "sampled(seed=" + std::to_string(opt.seed) + ")";
  return r;
}

}  // namespace clq
