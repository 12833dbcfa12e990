#include "wishart/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "wishart/complex_density.hpp"
#include "wishart/errors.hpp"

namespace wishart {

double effective_mean(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::DimensionMismatch, "mean of an empty list");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double density_large_n(const std::vector<double>& lambda, double gamma_bar, int n, double x) {
  EnsembleSpec spec;
  spec.p = static_cast<int>(lambda.size());
  spec.n = n;
  spec.beta = 2;
  spec.lambda = lambda;
  spec.gamma.assign(n, gamma_bar);
  return ConfluentDensity(spec)(x).value;
}

StationaryPoint stationary_point(std::complex<double> x, int n, int p, double lambda_bar,
                                 double gamma_bar) {
  using C = std::complex<double>;
  const C a = 0.5 * (n - p) * gamma_bar + x / (2 * lambda_bar);
  const C disc = double(n) * gamma_bar * x / lambda_bar - a * a;
  StationaryPoint sp;
  sp.rho0 = a + C(0.0, 1.0) * std::sqrt(disc);
  sp.sigma0 = double(n) / (C(0.0, 1.0) * sp.rho0);
  return sp;
}

std::pair<double, double> marchenko_pastur_support(int p, int n, double lambda_bar,
                                                   double gamma_bar) {
  const double q = std::sqrt(double(p) / n), lg = lambda_bar * gamma_bar;
  return {n * (1 - q) * (1 - q) * lg, n * (1 + q) * (1 + q) * lg};
}

double marchenko_pastur(double x, int p, int n, double lambda_bar, double gamma_bar) {
  if (p > n) throw Error(ErrorCode::UnsupportedRegime, "Marchenko-Pastur form needs p <= n");
  if (!(x > 0.0)) return 0.0;
  const double q = std::sqrt(double(p) / n), lg = lambda_bar * gamma_bar;
  const double rad = (x / n - (1 - q) * (1 - q) * lg) * ((1 + q) * (1 + q) * lg - x / n);
  if (rad <= 0.0) return 0.0;
  return n / (2 * std::numbers::pi * p * x * lg) * std::sqrt(rad);
}

}  // namespace wishart
