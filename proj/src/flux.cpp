#include "densepack/flux.hpp"

#include "densepack/errors.hpp"
#include "densepack/special_functions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace densepack {

using special::double_factorial;
using special::factorial;
using special::gamma_half;

std::string to_string(Regime r) {
  switch (r) {
    case Regime::power: return "power";
    case Regime::logarithmic: return "logarithmic";
    case Regime::regular: return "regular";
  }
  return "unknown";
}

FluxModel::FluxModel(int d, int p, double r) : d_(d), p_(p), r_(r) {
  if (d < 2) throw InvalidInput("flux model needs d >= 2");
  if (p < 2) throw InvalidInput("flux model needs integer p >= 2");
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("flux model needs r > 0");
  const int twice_beta = 2 * p - d - 1;
  regime_ = twice_beta > 0 ? Regime::power : twice_beta == 0 ? Regime::logarithmic : Regime::regular;
  if (regime_ == Regime::power) {
    c_ = 2.0 * std::pow(std::numbers::pi * r, 0.5 * (d - 1)) * gamma_half(d + 1) * gamma_half(twice_beta) /
         ((d - 1) * gamma_half(d - 1) * factorial(p - 2));
  }
}

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidInput("gap delta must be positive and finite");
}

double angular_factor(int d) { return 2.0 * std::pow(std::numbers::pi, 0.5 * (d - 1)) / gamma_half(d - 1); }

}  // namespace

double g0_main(const FluxModel& model, double delta) {
  check_delta(delta);
  switch (model.regime()) {
    case Regime::power:
      return model.c() * std::pow(delta, -model.beta());
    case Regime::logarithmic:
      if (model.d() == 3 && model.p() == 2) return std::numbers::pi * model.r() * std::log(model.r() / delta);
      throw InvalidInput("logarithmic main term is only available for d=3, p=2 (got d=" + std::to_string(model.d()) +
                         ", p=" + std::to_string(model.p()) + ")");
    case Regime::regular:
      break;
  }
  throw InvalidInput("no singular main term: p <= (d+1)/2 gives a bounded coefficient (d=" + std::to_string(model.d()) +
                     ", p=" + std::to_string(model.p()) + ")");
}

double g0_quadrature(const FluxModel& model, double delta, double rel_tol) {
  check_delta(delta);
  if (!(rel_tol > 0.0)) throw InvalidInput("rel_tol must be positive");
  const int d = model.d();
  const int p = model.p();
  const double r = model.r();
  const double Z = r / delta;
  const double scale = std::pow(r * delta, 0.5 * (d - 1)) * std::pow(delta, 1.0 - p);
  const int m = d - 2;
  const int k = 2 * p - 2 - d;

  double value = 0.0;
  double err = 0.0;
  using Integrator = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (k >= 0) {
    // R = sqrt(r delta) tan(theta)
    auto f = [m, k](double th) { return std::pow(std::sin(th), m) * std::pow(std::cos(th), k); };
    value = Integrator::integrate(f, 0.0, std::atan(std::sqrt(Z)), 20, rel_tol * 0.1, &err);
  } else {
    // R = sqrt(r delta) sinh(w)
    auto f = [m, p](double w) { return std::pow(std::sinh(w), m) * std::pow(std::cosh(w), 3 - 2 * p); };
    value = Integrator::integrate(f, 0.0, std::asinh(std::sqrt(Z)), 20, rel_tol * 0.1, &err);
  }
  if (!(err <= rel_tol * std::abs(value))) {
    throw QuadratureError("flux quadrature did not reach the requested accuracy", angular_factor(d) * scale * value,
                          angular_factor(d) * scale * err);
  }
  return angular_factor(d) * scale * value;
}

double g0_hypergeometric(const FluxModel& model, double delta) {
  check_delta(delta);
  const int d = model.d();
  const int p = model.p();
  const double r = model.r();
  const double F = special::hyp2f1_flux(d, p, r / delta);
  const double v = angular_factor(d) * std::pow(r, d - 1) * F / (std::pow(delta, p - 1) * (d - 1));
  if (!std::isfinite(v) || v == 0.0) throw RangeError("hypergeometric flux overflowed for delta = " + std::to_string(delta));
  return v;
}

std::function<double(double)> edge_weight_function(const FluxModel& model) {
  if (model.regime() != Regime::power) {
    throw InvalidInput("edge weight function needs the power regime, got " + to_string(model.regime()));
  }
  const double c = model.c();
  const double beta = model.beta();
  const double two_r = 2.0 * model.r();
  return [c, beta, two_r](double x) {
    if (!(x > two_r)) return std::numeric_limits<double>::infinity();
    return c * std::pow(x - two_r, -beta);
  };
}

namespace reference {

double odd_d_constant(int d, int p, double r) {
  if (d % 2 == 0 || 2 * p <= d + 1) throw InvalidInput("odd-d constant needs odd d and p > (d+1)/2");
  return std::pow(std::numbers::pi * r, 0.5 * (d - 1)) * factorial(p - (d + 3) / 2) / factorial(p - 2);
}

double even_d_constant(int d, int p, double r) {
  if (d % 2 != 0 || 2 * p <= d + 1) throw InvalidInput("even-d constant needs even d and p > (d+1)/2");
  return std::sqrt(std::numbers::pi) * std::pow(std::numbers::pi * r, 0.5 * (d - 1)) * double_factorial(2 * p - d - 3) /
         (std::pow(2.0, p - 0.5 * (d + 1)) * (p - 2));
}

double planar_nonlinear_constant(int p, double r) {
  if (p < 3) throw InvalidInput("planar nonlinear constant needs p >= 3");
  return double_factorial(2 * p - 5) / double_factorial(2 * p - 4) * std::pow(std::numbers::pi, 1.5) * std::sqrt(r);
}

double spatial_nonlinear_constant(int p, double r) {
  if (p < 3) throw InvalidInput("spatial nonlinear constant needs p >= 3");
  return std::numbers::pi * r / (p - 2);
}

}  // namespace reference

}  // namespace densepack
