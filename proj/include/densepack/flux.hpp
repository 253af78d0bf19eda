#pragma once

// Main term of the interparticle flux between two nearly touching balls of
// radius r separated by a gap delta, for the p-Laplacian in R^d.

#include <functional>
#include <string>

namespace densepack {

enum class Regime { power, logarithmic, regular };

std::string to_string(Regime r);

class FluxModel {
 public:
  /// d >= 2, integer p >= 2, r > 0.
  FluxModel(int d, int p, double r);

  int d() const { return d_; }
  int p() const { return p_; }
  double r() const { return r_; }
  /// Singularity exponent p - (d+1)/2.
  double beta() const { return p_ - 0.5 * (d_ + 1); }
  Regime regime() const { return regime_; }
  /// Main-term constant (power regime only; 0 otherwise).
  double c() const { return c_; }

 private:
  int d_;
  int p_;
  double r_;
  Regime regime_;
  double c_ = 0.0;
};

/// Leading singular term: c * delta^-beta, or pi r ln(r/delta) for d=3, p=2.
double g0_main(const FluxModel& model, double delta);

/// The defining gap integral evaluated by adaptive Gauss-Kronrod quadrature.
double g0_quadrature(const FluxModel& model, double delta, double rel_tol = 1e-10);

/// Closed form through 2F1((d-1)/2, p-1; (d+1)/2; -r/delta).
double g0_hypergeometric(const FluxModel& model, double delta);

/// f(x) = c (x - 2r)^-beta on x > 2r; +inf at or below contact.
std::function<double(double)> edge_weight_function(const FluxModel& model);

/// Alternative constants for c found in the literature, kept for comparison.
/// All return the coefficient of delta^-beta.
namespace reference {
/// Odd d: (pi r)^((d-1)/2) (p - (d+3)/2)! / (p-2)!.
double odd_d_constant(int d, int p, double r);
/// Even d: sqrt(pi) (pi r)^((d-1)/2) (2p-d-3)!! / (2^(p-(d+1)/2) (p-2)).
double even_d_constant(int d, int p, double r);
/// Planar nonlinear: (2p-5)!!/(2p-4)!! pi^(3/2) r^(1/2).
double planar_nonlinear_constant(int p, double r);
/// Spatial nonlinear: pi r / (p-2).
double spatial_nonlinear_constant(int p, double r);
}  // namespace reference

}  // namespace densepack
