#pragma once

// Exact-constant helpers for the flux formulas. Only integer and
// half-integer Gamma arguments are needed, so no general Gamma is used.

namespace densepack::special {

/// n! for n >= 0.
double factorial(int n);

/// n!! with (-1)!! = 0!! = 1.
double double_factorial(int n);

/// Gamma(m / 2) for integer m >= 1.
double gamma_half(int m);

/// Gauss series 2F1(a, b; c; z), intended for |z| <= 1/2.
double hyp2f1_series(double a, double b, double c, double z);

/// 2F1((d-1)/2, p-1; (d+1)/2; -Z) for Z >= 0 by finite trigonometric
/// reduction (integer p). d >= 2, p >= 2.
double hyp2f1_flux(int d, int p, double Z);

}  // namespace densepack::special
