#pragma once

#include <memory>
#include <vector>

#include "wishart/double_double.hpp"
#include "wishart/spec.hpp"

namespace wishart {

enum class Precision { Double, Extended, Auto };

struct DensityValue {
  double value = 0.0;
  double error = 0.0;
  bool extended = false;  // evaluated in double-double
};

// Precomputed pieces of the closed form; eigenvalues rescaled by powers of two.
struct ComplexDensityPlan {
  EnsembleSpec spec;
  double scale = 1.0;  // S(x) = S_scaled(x / scale) / scale
  template <class T>
  struct Tables {
    std::vector<T> lambda, gamma;
    std::vector<T> e_lambda, e_gamma;
    std::vector<std::vector<T>> e_lambda_excl, e_gamma_excl;
    std::vector<T> delta_lambda, delta_gamma;
    std::vector<std::vector<T>> inv_diff_gamma;  // 1/(1/G_l - 1/G_k)
    std::vector<std::vector<T>> inv_diff_lambda;
    T prefactor;
  };
  Tables<double> d;
  Tables<DoubleDouble> dd;
  double x_floor = 0.0;
};

ComplexDensityPlan make_complex_plan(const EnsembleSpec& spec, double gap = 1e-8);

double density_exact_c2(const ComplexDensityPlan& plan, double x);
DensityValue density_exact_c2_detail(const ComplexDensityPlan& plan, double x,
                                     Precision precision = Precision::Auto,
                                     double tolerance = 1e-9);

struct DegenerateOptions {
  double eps_max = 1e-2;
  double eps_min = 1e-4;
  int steps = 11;
};

// Closed form on split eigenvalues, Richardson-extrapolated in eps^2.
DensityValue density_degenerate_c2(const EnsembleSpec& spec, double x,
                                   const DegenerateOptions& opts = {});

// Coalesced eigenvalues evaluated exactly as residues at the distinct values.
struct ConfluentPlan;
class ConfluentDensity {
 public:
  explicit ConfluentDensity(const EnsembleSpec& spec);
  DensityValue operator()(double x) const;

 private:
  std::shared_ptr<const ConfluentPlan> plan_;
};

DensityValue density_confluent_c2(const EnsembleSpec& spec, double x);

}  // namespace wishart
