#pragma once

#include <cstdint>
#include <vector>

#include "wishart/real_density.hpp"
#include "wishart/spec.hpp"

namespace wishart {

struct CurveOptions {
  RealQuadConfig quad;
  bool corrected = true;   // character formula erratum
  bool extended = false;   // character formula in double-double
  long samples = 100000;   // Monte Carlo
  std::uint64_t seed = 1;
  int bins = 100;
};

// Throws BadBeta / UnsupportedRegime when the method cannot handle the spec.
void check_method(const EnsembleSpec& spec, Method method);

// Evaluates the method on the grid; MonteCarlo bins the grid range into opts.bins bins.
DensityCurve compute_curve(const EnsembleSpec& spec, Method method, const std::vector<double>& grid,
                           const CurveOptions& opts = {});

// Lambda and Gamma pair values when every value occurs exactly twice.
bool pair_structure(const EnsembleSpec& spec, DegeneratePairSpec& pairs);

}  // namespace wishart
