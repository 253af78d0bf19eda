#pragma once

// Reference lattices with nearest-neighbor distance 1 (touching radius 1/2).

#include "densepack/energy.hpp"
#include "densepack/optimizer.hpp"

#include <string>

namespace densepack {

enum class Family { Z, A2, FCC, HCP };

std::string to_string(Family f);
/// Accepts "zd", "z", "a2", "fcc", "hcp" (case-insensitive).
Family parse_family(const std::string& s);

struct LatticeSpec {
  Family family = Family::Z;
  int m = 1;  ///< repetitions per cell direction
  int d = 2;  ///< used by Z only
};

struct LatticeData {
  Configuration config;  ///< radius = r_touch
  PeriodicGraph graph;
  GraphClass cls;
  double r_touch = 0.5;
};

/// A2 and Z_d have m^d centers, FCC 4 m^3 (cubic cell), HCP 2 m^3.
LatticeData generate(const LatticeSpec& spec);

/// Layer-constant potentials (layer index, shifted to mean zero) and the
/// external field normal to the layers, scaled so adjacent layers differ by 1.
PotentialField layered_potential(const LatticeSpec& spec, const Configuration& config);

}  // namespace densepack
