#pragma once

#include "wishart/errors.hpp"

namespace wishart {

struct SpecFunResult {
  double value = 0.0;
  double est_error = 0.0;
};

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

double bessel_j0(double x);
double bessel_j1(double x);

// Exponential integrals for x > 0.
double expint_e1(double x);
double expint_ei(double x);
// e^x E1(x) and e^-x Ei(x), finite for large x.
double expint_e1_scaled(double x);
double expint_ei_scaled(double x);

// Hyperbolic cosine and sine integrals; chi needs x > 0.
double chi(double x);
double shi(double x);

// Re CosI(iy) = Chi(|y|), CosI(x) = -int_x^inf cos t / t dt.
double cosi_imag_re(double y);
double sinhi(double x);

// h(a,b) = Im int_0^inf e^{ibs}/(is - a) ds, a function of ab alone.
SpecFunResult h_kernel(double a, double b, double floor = 1e-12);
// Same value assembled from CosI and SinhI; cancels badly for ab beyond ~15.
double h_kernel_cosi(double a, double b);

}  // namespace wishart
