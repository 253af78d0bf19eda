#include "densepack/special_functions.hpp"

#include "densepack/errors.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <utility>

namespace densepack::special {

double factorial(int n) {
  if (n < 0) throw InvalidInput("factorial of a negative integer");
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double double_factorial(int n) {
  if (n < -1) throw InvalidInput("double factorial below -1");
  double r = 1.0;
  for (int i = n; i > 1; i -= 2) r *= i;
  return r;
}

double gamma_half(int m) {
  if (m < 1) throw InvalidInput("gamma_half needs m >= 1");
  if (m % 2 == 0) return factorial(m / 2 - 1);
  return double_factorial(m - 2) * std::sqrt(std::numbers::pi) / std::pow(2.0, (m - 1) / 2);
}

double hyp2f1_series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 10000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw NumericalFailure("hypergeometric series did not converge");
}

namespace {

// W(m, k) = integral of sin^m cos^k over [0, atan(sqrt Z)], k >= -1.
class TrigIntegral {
 public:
  explicit TrigIntegral(double Z)
      : Z_(Z), s_(std::sqrt(Z / (1.0 + Z))), cc_(1.0 / std::sqrt(1.0 + Z)) {}

  double operator()(int m, int k) {
    const auto key = std::make_pair(m, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double v;
    if (k >= 2) {
      v = std::pow(s_, m + 1) * std::pow(cc_, k - 1) / (m + k) +
          static_cast<double>(k - 1) / (m + k) * (*this)(m, k - 2);
    } else if (m >= 2) {
      v = -std::pow(s_, m - 1) * std::pow(cc_, k + 1) / (m + k) +
          static_cast<double>(m - 1) / (m + k) * (*this)(m - 2, k);
    } else if (m == 0 && k == 0) {
      v = std::atan(std::sqrt(Z_));
    } else if (m == 1 && k == 0) {
      v = s_ * s_ / (1.0 + cc_);
    } else if (m == 0 && k == 1) {
      v = s_;
    } else if (m == 1 && k == 1) {
      v = 0.5 * s_ * s_;
    } else if (m == 0 && k == -1) {
      v = std::asinh(std::sqrt(Z_));
    } else if (m == 1 && k == -1) {
      v = 0.5 * std::log1p(Z_);
    } else {
      throw NumericalFailure("trigonometric reduction reached an unsupported index");
    }
    memo_.emplace(key, v);
    return v;
  }

 private:
  double Z_, s_, cc_;
  std::map<std::pair<int, int>, double> memo_;
};

// I(m, n) = integral over [0,1] of u^m / (u^2 + eps)^n.
class RationalIntegral {
 public:
  explicit RationalIntegral(double Z) : eps_(1.0 / Z), trig_(Z) {}

  double operator()(int m, int n) {
    if (n == 0) return 1.0 / (m + 1);
    if (2 * n - 2 - m >= -1) {
      return std::pow(eps_, 0.5 * (m + 1) - n) * trig_(m, 2 * n - 2 - m);
    }
    const auto key = std::make_pair(m, n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const double v = (*this)(m - 2, n - 1) - eps_ * (*this)(m - 2, n);
    memo_.emplace(key, v);
    return v;
  }

 private:
  double eps_;
  TrigIntegral trig_;
  std::map<std::pair<int, int>, double> memo_;
};

}  // namespace

double hyp2f1_flux(int d, int p, double Z) {
  if (d < 2 || p < 2) throw InvalidInput("hyp2f1_flux needs d >= 2 and p >= 2");
  if (!(Z >= 0.0)) throw InvalidInput("hyp2f1_flux needs Z >= 0");
  const double a = 0.5 * (d - 1);
  const int n = p - 1;
  if (Z <= 0.5) return hyp2f1_series(a, n, a + 1.0, -Z);
  const int m = d - 2;
  const int k = 2 * n - 2 - m;
  if (k >= -1) {
    TrigIntegral w(Z);
    return 2.0 * a * std::pow(Z, -a) * w(m, k);
  }
  RationalIntegral I(Z);
  return 2.0 * a * std::pow(Z, -n) * I(m, n);
}

}  // namespace densepack::special
