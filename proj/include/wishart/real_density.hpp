#pragma once

#include <complex>
#include <vector>

#include "wishart/spec.hpp"

namespace wishart {

using cplx = std::complex<double>;

struct RealQuadConfig {
  double eps = 1e-2;          // x^- = x - i eps, relative to x
  double tail_cut = 40.0;     // radial axes truncated where the weight drops below e^-tail_cut
  int nodes = 16;             // Gauss-Legendre nodes per radial segment
  int angle_nodes = 24;       // trapezoid nodes per angle
  double tolerance = 1e-3;    // relative
  double abs_tolerance = 1e-6;
  double damping = 0.7853981633974483;  // contour rotation angle of the radial axes
  double max_evaluations = 6e7;
};

void validate_quad_config(const RealQuadConfig& cfg);

// Which of the three summands to include.
struct RealTerms {
  bool t1 = true, t2 = true, t3 = true;
};

struct RealQuadResult {
  double value = 0.0;
  double error = 0.0;
  double extrapolation_residual = 0.0;
  double node_difference = 0.0;
  double evaluations = 0.0;
};

// Integrands of the three fourfold integrals over (S, s, R, r), without the
// constant in front. Square roots are taken per factor, which is the branch
// continued from S = 0 (resp. R = 0).
cplx integrand_s11(double S, double s, double R, double r, const EnsembleSpec& spec, double x,
                   double eps);
// as_printed keeps J0 - iJ1; the default uses J0 + iJ1.
cplx integrand_s12(double S, double s, double R, double r, const EnsembleSpec& spec, double x,
                   double eps, bool as_printed = false);
cplx integrand_s13(double S, double s, double R, double r, const EnsembleSpec& spec, double x,
                   double eps);
// Constants multiplying Im of the fourfold integrals: 1/(512 p pi^2), -1/(256 p pi^2), 1/(512 p pi^2).
double s1_term_prefactor(int term, int p);

RealQuadResult density_quad_r1(const EnsembleSpec& spec, double x,
                               const RealQuadConfig& cfg = {}, RealTerms terms = {});

struct DegeneratePairSpec {
  std::vector<double> lambda_pairs;
  std::vector<double> gamma_pairs;
};

EnsembleSpec expand_pairs(const DegeneratePairSpec& pairs);

RealQuadResult reduced_s11_degenerate(const DegeneratePairSpec& pairs, double x,
                                      const RealQuadConfig& cfg = {});

}  // namespace wishart
