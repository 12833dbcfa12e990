#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace wishart {

// Arithmetic mean sum(v)/len; used for both Lambda-bar and Gamma-bar.
double effective_mean(const std::vector<double>& values);

// Complex density with every Gamma_k replaced by gamma_bar.
double density_large_n(const std::vector<double>& lambda, double gamma_bar, int n, double x);

struct StationaryPoint {
  std::complex<double> sigma0;
  std::complex<double> rho0;
};

StationaryPoint stationary_point(std::complex<double> x, int n, int p, double lambda_bar,
                                 double gamma_bar);

// [n(1 - sqrt(p/n))^2 LG, n(1 + sqrt(p/n))^2 LG] with LG = lambda_bar * gamma_bar.
std::pair<double, double> marchenko_pastur_support(int p, int n, double lambda_bar,
                                                   double gamma_bar);

double marchenko_pastur(double x, int p, int n, double lambda_bar, double gamma_bar);

}  // namespace wishart
