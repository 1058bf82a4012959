#pragma once

// Bundled fans and random complete simplicial stacky fans for tests.

#include "stackheight/raised_heights.hpp"
#include "stackheight/stacky_fan.hpp"

#include <random>
#include <string>
#include <vector>

namespace stackheight::testing {

inline const std::vector<std::string> kBundledFans = {"p1", "p12", "p23", "p2", "p1xbmu2"};

std::string fan_path(const std::string& name);
StackyFan load_bundled_spec(const std::string& name);
Fan load_bundled(const std::string& name);

struct RandomFanOptions {
  std::size_t dim = 2;
  int max_subdivisions = 3;
  bool multipliers = true;  // scale rays by 1, 2 or 3
  bool torsion = true;      // sometimes add Z/2 or Z/3
};

/// Cross-polytope fan, random stellar subdivisions, a random GL(d, Z) change of
/// coordinates, then optional ray multipliers and torsion.
StackyFan random_fan(std::mt19937_64& rng, const RandomFanOptions& options);

/// Applies the integer matrix u (rows of length d) to every ray.
StackyFan transform_fan(const StackyFan& fan, const std::vector<LatticePoint>& u);
std::vector<LatticePoint> random_unimodular(std::mt19937_64& rng, std::size_t d);

/// A rational point of the interior of Lambda: Xi-coordinates drawn from
/// [lo, hi] with denominator 4.
RaisedVector random_interior(std::mt19937_64& rng, const Fan& fan, int lo4 = 2, int hi4 = 8);

}  // namespace stackheight::testing
