#pragma once

// Periodic Delaunay graph (in the sense that excludes degenerate contacts):
// two balls are neighbors iff their Voronoi cells on the torus share a facet
// of positive (d-1)-measure.

#include "densepack/torus.hpp"

#include <string>
#include <vector>

namespace densepack {

/// Undirected neighbor relation between center k and the image of center j
/// located at a_j + sum_l shift_l nu_l.
///
/// Canonical orientation: k < j, or k == j with a lexicographically positive
/// shift. Self-edges (k == j) stand for the pair of images at +shift and -shift.
struct PeriodicEdge {
  int k = 0;
  int j = 0;
  Shift shift;
  double gap = 0.0;     ///< length - 2r
  double length = 0.0;  ///< |a_j + shift - a_k|
  double facet = 0.0;   ///< Voronoi facet measure (0 when unknown)

  bool is_self() const { return k == j; }
};

class PeriodicGraph {
 public:
  PeriodicGraph() = default;
  PeriodicGraph(int n, std::vector<PeriodicEdge> edges);

  int size() const { return n_; }
  const std::vector<PeriodicEdge>& edges() const { return edges_; }
  /// N_k: directed neighbor count (a self-edge contributes 2).
  int degree(int k) const { return degrees_[static_cast<std::size_t>(k)]; }
  const std::vector<int>& degrees() const { return degrees_; }
  /// Indices into edges() incident to k.
  const std::vector<int>& incident(int k) const { return incident_[static_cast<std::size_t>(k)]; }
  /// Connected components ignoring shifts; component id per vertex.
  std::vector<int> components() const;
  int component_count() const;

 private:
  int n_ = 0;
  std::vector<PeriodicEdge> edges_;
  std::vector<int> degrees_;
  std::vector<std::vector<int>> incident_;
};

struct DelaunayOptions {
  /// Facets with measure <= facet_tol * volume^((d-1)/d) are treated as degenerate.
  double facet_tol = 1e-9;
};

/// Builds the periodic Delaunay graph of the configuration's centers. Gaps use
/// config.radius.
PeriodicGraph build_delaunay(const Configuration& config, const DelaunayOptions& opts = {});

/// Same edge set, lengths and gaps recomputed for new centers / radius.
PeriodicGraph with_geometry(const PeriodicGraph& g, const Configuration& config);

/// Canonical text signature: degree multiset, color-refinement classes and the
/// Hermite normal form of the winding lattice generated by cycle shifts.
/// Equal for relabeled copies and for re-wrapped (gauge-shifted) centers.
struct GraphSignature {
  std::string text;
  bool operator==(const GraphSignature&) const = default;
};

GraphSignature graph_class_signature(const PeriodicGraph& g);

}  // namespace densepack
