#pragma once

// Jensen/Hoelder lower bound on the discrete energy, and detection of
// percolation chains of touching balls.

#include "densepack/energy.hpp"

#include <vector>

namespace densepack {

struct BoundReport {
  bool defined = false;     ///< false when every drop vanishes (T = 0)
  double T = 0.0;           ///< directed sum of |drop|^p
  double mean_arg = 0.0;    ///< argument of f in the bound
  double bound = 0.0;
  double energy = 0.0;
  double equality_gap = 0.0;  ///< (energy - bound) / energy
  bool equal_drop_edges_equal_gap = false;
  int support_edges = 0;    ///< stored edges with a non-negligible drop
};

/// Requires the power regime. model.r() must match the radius behind the
/// graph's gaps.
BoundReport lower_bound(const PeriodicGraph& graph, const FluxModel& model, const PotentialField& field,
                        const Basis& basis);

struct TouchingEdge {
  int k = 0;
  int j = 0;
  Shift shift;  ///< image of j at a_j + shift
  double gap = 0.0;
};

/// All pairs (over the {-2..2}^d image window) with gap <= touch_tol * r.
std::vector<TouchingEdge> touching_edges(const Configuration& config, double touch_tol = 1e-8);

struct PercolationReport {
  std::vector<bool> winding;  ///< per basis direction
  int touching_edges = 0;
  bool isotropy_necessary = false;
  std::vector<int> component;       ///< touching-graph component per center
  std::vector<int> component_rank;  ///< rank of each component's winding lattice
};

PercolationReport detect_percolation(const Configuration& config, double touch_tol = 1e-8);

struct DensifyHint {
  int component = 0;
  std::vector<int> members;
  double translation = 0.0;  ///< rigid move length that closes the nearest gap
  int from = 0;              ///< member realizing the gap
  int to = 0;                ///< center on the other side
};

/// One hint per component whose winding lattice is not full rank.
std::vector<DensifyHint> densify_hint(const Configuration& config, double touch_tol = 1e-8);

}  // namespace densepack
