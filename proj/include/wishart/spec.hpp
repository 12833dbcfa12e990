#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "wishart/errors.hpp"

namespace wishart {

struct EnsembleSpec {
  int p = 1;
  int n = 1;
  int beta = 2;
  std::vector<double> lambda;
  std::vector<double> gamma;
};

// Distinct values with their multiplicities, in first-seen order.
struct Multiplicity {
  std::vector<double> values;
  std::vector<int> counts;
};

struct ValidatedSpec {
  EnsembleSpec spec;
  bool lambda_distinct = true;
  bool gamma_distinct = true;
  Multiplicity lambda_mult;
  Multiplicity gamma_mult;
  bool distinct() const { return lambda_distinct && gamma_distinct; }
};

ValidatedSpec validate_spec(const EnsembleSpec& spec, double gap = 1e-8);

struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;
  double value() const;
};

SignedLog normalization_constant(const EnsembleSpec& spec);

enum class Method {
  ComplexExact,
  Character,
  RealQuad,
  RealDegenerate,
  LargeN,
  MarchenkoPastur,
  MonteCarlo,
};

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> errors;  // optional, same length as grid when present
  Method method = Method::ComplexExact;
  double delta_mass_at_zero = 0.0;
  bool dual = false;
  EnsembleSpec spec;
  std::vector<double> bin_edges;  // histogram curves: grid.size() + 1 edges
  std::map<std::string, double> meta;
};

DensityCurve dual_density_transform(const DensityCurve& curve);
DensityCurve rescale_density(const DensityCurve& curve, double divisor);

double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

// Upper support heuristic 1.2 * max(lambda*gamma) * (sqrt p + sqrt n)^2.
double default_x_max(const EnsembleSpec& spec);
// Log-spaced below x_max/count, linear above.
std::vector<double> default_grid(const EnsembleSpec& spec, std::size_t count);
std::vector<double> linear_grid(double a, double b, std::size_t count);

}  // namespace wishart
