#pragma once

#include <vector>

#include "wishart/complex_density.hpp"
#include "wishart/spec.hpp"

namespace wishart {

struct CharacterPlan {
  int p = 0, n = 0;
  std::vector<double> a;  // 1/Gamma_i
  std::vector<double> b;  // 1/Lambda_j
  bool corrected = true;
  // prod_{j<p} j! / (p ((n-1)!)^p Delta_n(a) Delta_p(b)), x-independent part
  SignedLog prefactor;
};

CharacterPlan make_character_plan(const EnsembleSpec& spec, bool corrected = true);

// x^(n-alpha) (alpha-1)! sum_{m<alpha} (-z x)^m / m!
double g_kernel(double x, int alpha, double z, int n);

// Sum of the two determinant families times the prefactor, in double.
double density_character(const CharacterPlan& plan, double x);
// Same evaluation in double-double.
double density_character_extended(const CharacterPlan& plan, double x);

}  // namespace wishart
