#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wishart/spec.hpp"

namespace wishart {

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t z);

// Counter-based stream: word i of draw d is splitmix64(key_d + i * golden) with
// key_d = splitmix64(seed ^ splitmix64(d)). Streams do not depend on thread count.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t draw);
  std::uint64_t next();
  // Uniform on (0, 1].
  double uniform();
  // Box-Muller: two uniforms per pair of standard normals.
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct McConfig {
  EnsembleSpec spec;
  long samples = 10000;
  std::uint64_t seed = 1;
  int bins = 100;
  std::vector<double> edges;  // overrides bins when non-empty
};

// Cyclic Jacobi; eigenvalues ascending.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-14, int max_sweeps = 100);
// Hermitian matrix via the real 2p x 2p embedding [[A, -B], [B, A]].
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& h);

// Eigenvalues of one draw, ascending.
std::vector<double> draw_eigenvalues(const EnsembleSpec& spec, std::uint64_t seed,
                                     std::uint64_t draw);

// samples * p eigenvalues, record by record.
std::vector<double> sample_wishart(const McConfig& cfg);

DensityCurve histogram_density(const std::vector<double>& values, const std::vector<double>& edges);
std::vector<double> uniform_edges(double lo, double hi, int bins);

struct ComparisonReport {
  double l1 = 0.0;
  double sup = 0.0;
  double mean_a = 0.0, mean_b = 0.0;
  double second_a = 0.0, second_b = 0.0;
  double mean_delta = 0.0;
  double second_moment_delta = 0.0;
  double fraction_outside = 0.0;  // histogram comparisons only
  double error_bar_sigma = 2.0;
  int bins_compared = 0;
};

// A bin counts as outside when |a - b| exceeds error_bar_sigma counting standard errors.
ComparisonReport compare_densities(const DensityCurve& a, const DensityCurve& b,
                                   double error_bar_sigma = 2.0);

struct SampleFileHeader {
  int p = 0, n = 0, beta = 0;
  std::uint64_t seed = 0;
  std::uint64_t count = 0;
};

void write_samples(const std::string& path, const SampleFileHeader& header,
                   const std::vector<double>& values);
std::vector<double> read_samples(const std::string& path, SampleFileHeader& header);

}  // namespace wishart
