#pragma once

// Center placement inside a fixed graph class: every center sits at the
// mean of its neighbors' images,
//   N_k a_k = sum_{(j,s) in J_k} (a_j + sum_l s_l nu_l).

#include "densepack/analysis.hpp"
#include "densepack/graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace densepack {

struct ClassNeighbor {
  int j = 0;
  Shift shift;
  bool operator==(const ClassNeighbor&) const = default;
};

struct GraphClass {
  int n = 0;
  int d = 0;
  std::vector<std::vector<ClassNeighbor>> adjacency;

  int degree(int k) const { return static_cast<int>(adjacency[static_cast<std::size_t>(k)].size()); }
  /// Throws InvalidInput unless (j,s) in J_k <=> (k,-s) in J_j (as multisets).
  void validate() const;
  bool connected() const;
};

GraphClass class_from_graph(const PeriodicGraph& g);
/// Canonical edges of the class; lengths and gaps are zero.
PeriodicGraph class_graph(const GraphClass& cls);

struct CenterSolution {
  /// Fractional coordinate of center k along nu_l. The same table serves
  /// every Cartesian coordinate: a_k = sum_l coeffs(k,l) nu_l.
  Eigen::MatrixXd coeffs;
  std::vector<TorusPoint> centers;  ///< coeffs reduced mod 1
  double residual = 0.0;            ///< max_k |stationarity defect| / N_k (Cartesian)
};

struct SolveOptions {
  double tol = 1e-10;
};

/// Coefficient table only (basis independent).
Eigen::MatrixXd solve_centers_symbolic(const GraphClass& cls, const SolveOptions& opts = {});

CenterSolution solve_centers(const GraphClass& cls, const Basis& basis, const SolveOptions& opts = {});

/// Cartesian position of center k for an unreduced coefficient table.
Eigen::VectorXd realize(const Eigen::MatrixXd& coeffs, int k, const Basis& basis);

/// max_k |N_k a_k - sum (a_j + s nu)| / N_k for unreduced fractional coordinates.
double stationarity_residual(const GraphClass& cls, const Basis& basis, const Eigen::MatrixXd& coeffs);

/// Sum over k and (j,s) in J_k of the left-hand sides; an identity (zero) for
/// symmetric classes, whatever the coordinates.
Eigen::VectorXd summed_residual(const GraphClass& cls, const Basis& basis, const Eigen::MatrixXd& coeffs);

/// Per-coordinate system matrix: N_k on the diagonal minus neighbor counts.
Eigen::MatrixXd class_laplacian(const GraphClass& cls);

/// Directed sum of |a_j + s nu - a_k|^2.
double spread(const GraphClass& cls, const Basis& basis, const Eigen::MatrixXd& coeffs);

struct RelaxOptions {
  int max_sweeps = 200000;
  double tol = 1e-15;
};

/// Gauss-Seidel sweeps on the stationarity system from `start`. The spread is
/// convex at a fixed class, so the sweeps descend to its stationary point.
Eigen::MatrixXd relax_centers(const GraphClass& cls, const Eigen::MatrixXd& start, const RelaxOptions& opts = {});

struct SpreadResult {
  double value = 0.0;
  CenterSolution solution;
  std::vector<double> restarts;  ///< spread reached from each perturbed start
};

SpreadResult maximize_spread(const GraphClass& cls, const Basis& basis, int restarts = 0, std::uint64_t seed = 1);

struct PackReport {
  Configuration config;
  CenterSolution solution;
  double density = 0.0;
  bool class_violation = false;
  std::string class_signature;
  std::string realized_signature;
};

/// Volume of the unit d-ball.
double unit_ball_volume(int d);

double packing_density(const Configuration& config);

PackReport pack_in_class(const GraphClass& cls, const Basis& basis, double facet_tol = 1e-9);

struct ScanEntry {
  std::optional<Basis> basis;
  bool valid = false;
  std::string error;
  double density = 0.0;
  bool class_violation = false;
  PercolationReport percolation;
  bool accepted = false;
};

struct ScanResult {
  std::vector<ScanEntry> entries;
  int best = -1;  ///< index of the densest accepted entry
};

/// Packs the class in each candidate basis. Accepted entries have a
/// percolation chain in every direction. Invalid bases are recorded, not thrown.
ScanResult scan_bases(const GraphClass& cls, const std::vector<Eigen::MatrixXd>& bases, double facet_tol = 1e-9,
                      double touch_tol = 1e-8, int threads = 1);

/// 2-D grid: nu_1 = (1,0), nu_2 = ratio (cos angle, sin angle).
std::vector<Eigen::MatrixXd> planar_basis_grid(const std::vector<double>& angles, const std::vector<double>& ratios);

}  // namespace densepack
