#pragma once

// Voronoi cell of a single site against a finite set of neighbor sites.
// The site sits at the origin; candidates are given as vectors from it.

#include <Eigen/Dense>

#include <vector>

namespace densepack::voronoi {

/// How `Facet::measure` was obtained.
enum class MeasureKind {
  exact,     ///< (d-1)-volume of the facet (count for d = 1, length for d = 2, area for d = 3)
  inradius,  ///< radius of the largest (d-1)-ball inscribed in the facet (d >= 4)
};

struct Facet {
  int candidate = -1;  ///< index into the candidate list
  double measure = 0.0;
};

struct Cell {
  MeasureKind kind = MeasureKind::exact;
  std::vector<Facet> facets;  ///< one per candidate whose bisector bounds the cell
  double max_vertex_norm = 0.0;
};

/// Cell of the origin bounded by the bisectors {x : x.v <= |v|^2 / 2}.
///
/// d <= 3 clips a box polytope plane by plane (candidates processed by
/// increasing norm, stopping once no bisector can reach the cell).
/// d >= 4 solves one linear program per candidate for the facet inradius;
/// `radius_bound` must bound the cell's circumradius there.
Cell compute_cell(const std::vector<Eigen::VectorXd>& candidates, int d, double radius_bound);

/// Inradius of the facet on candidate `which`'s bisector, by linear
/// programming over all other bisectors. Negative or zero when the bisector
/// meets the cell in a set of empty relative interior.
double facet_inradius(const std::vector<Eigen::VectorXd>& candidates, int which, double radius_bound);

}  // namespace densepack::voronoi
