#pragma once

// Discrete energy on the periodic graph and its minimization over the
// sphere potentials t for a prescribed external flux direction.

#include "densepack/flux.hpp"
#include "densepack/graph.hpp"

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace densepack {

/// Potentials t_k plus the external field. The jump across a wrapped edge
/// with shift s is amplitude * xi . (sum_l s_l nu_l).
struct PotentialField {
  Eigen::VectorXd xi;  ///< unit direction
  Eigen::VectorXd t;
  double amplitude = 1.0;
};

/// Normalizes `v`; throws InvalidInput for a zero or non-finite vector.
Eigen::VectorXd unit_direction(const Eigen::VectorXd& v);

/// Jump term amplitude * xi . offset(shift).
double edge_jump(const PotentialField& field, const PeriodicEdge& e, const Basis& basis);

/// t_k - t_j - jump.
double edge_difference(const PotentialField& field, const PeriodicEdge& e, const Basis& basis);

/// Flux weight for a gap: g0_main, +inf for gap <= 0.
double edge_weight(const FluxModel& model, double gap);

/// (1 / 2|Q0|) sum over directed neighbor pairs of w |drop|^p. Every stored
/// edge appears twice in that sum. +inf when some gap is <= 0.
double energy(const PeriodicGraph& graph, const FluxModel& model, const PotentialField& field, const Basis& basis);

/// Abstract minimization problem: minimize sum_e w_e |t_k - t_j - b_e|^p.
struct PotentialProblem {
  int n = 0;
  int p = 2;
  std::vector<int> k, j;
  std::vector<double> w, b;
};

enum class PotentialMethod { automatic, linear, newton };

struct MinimizeOptions {
  double tol = 1e-10;
  int max_iter = 500;
  PotentialMethod method = PotentialMethod::automatic;
};

struct PotentialSolution {
  Eigen::VectorXd t;  ///< mean zero on every connected component
  double objective = 0.0;  ///< sum_e w_e |drop_e|^p
  int iterations = 0;
  double grad_norm = 0.0;
};

/// p = 2: one Laplacian solve. p > 2: damped Newton with Armijo backtracking.
PotentialSolution solve_potentials(const PotentialProblem& prob, const MinimizeOptions& opts = {});

struct EnergyReport {
  double sigma = 0.0;
  Eigen::VectorXd t_opt;
  Eigen::VectorXd xi;
  double amplitude = 1.0;
  std::vector<double> per_edge;  ///< directed-pair contribution 2 w |drop|^p per stored edge
  int iterations = 0;
  double bound = std::numeric_limits<double>::quiet_NaN();
  double equality_gap = std::numeric_limits<double>::quiet_NaN();
};

PotentialProblem potential_problem(const PeriodicGraph& graph, const FluxModel& model, const Eigen::VectorXd& xi,
                                   const Basis& basis, double amplitude = 1.0);

EnergyReport minimize_potentials(const PeriodicGraph& graph, const FluxModel& model, const Eigen::VectorXd& xi,
                                 const Basis& basis, const MinimizeOptions& opts = {}, double amplitude = 1.0);

}  // namespace densepack
