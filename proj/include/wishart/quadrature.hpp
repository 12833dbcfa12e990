#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace wishart {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; cached per size.
const GaussRule& gauss_legendre(int n);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b], global bisection of the worst interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-12, double rel_tol = 1e-12, int max_intervals = 2000);

// Same, split at the given interior breakpoints.
QuadResult integrate(const std::function<double(double)>& f, std::vector<double> points,
                     double abs_tol = 1e-12, double rel_tol = 1e-12, int max_intervals = 4000);

// int_a^inf via x = a + t/(1-t).
QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            double abs_tol = 1e-12, double rel_tol = 1e-12,
                            int max_intervals = 2000);

}  // namespace wishart
