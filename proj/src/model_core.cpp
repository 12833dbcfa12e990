#include <algorithm>
#include <cmath>
#include <numbers>

#include "wishart/spec.hpp"

namespace wishart {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveEigenvalue: return "NonPositiveEigenvalue";
    case ErrorCode::BadBeta: return "BadBeta";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::DegenerateEigenvalues: return "DegenerateEigenvalues";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::ExtrapolationDiverged: return "ExtrapolationDiverged";
    case ErrorCode::SingularPrefactor: return "SingularPrefactor";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::CostGuard: return "CostGuard";
    case ErrorCode::BranchTrackingFailure: return "BranchTrackingFailure";
    case ErrorCode::SingularityOnNode: return "SingularityOnNode";
    case ErrorCode::EigSolverFailure: return "EigSolverFailure";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::DisjointSupports: return "DisjointSupports";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

Multiplicity multiplicities(const std::vector<double>& v, double gap, bool& distinct) {
  Multiplicity m;
  distinct = true;
  for (double x : v) {
    bool found = false;
    for (std::size_t i = 0; i < m.values.size(); ++i) {
      if (std::abs(x - m.values[i]) <= gap * std::max(x, m.values[i])) {
        ++m.counts[i];
        found = true;
        distinct = false;
        break;
      }
    }
    if (!found) {
      m.values.push_back(x);
      m.counts.push_back(1);
    }
  }
  return m;
}

}  // namespace

ValidatedSpec validate_spec(const EnsembleSpec& spec, double gap) {
  if (spec.p < 1 || spec.n < 1)
    throw Error(ErrorCode::DimensionMismatch, "p and n must be positive");
  if (static_cast<int>(spec.lambda.size()) != spec.p)
    throw Error(ErrorCode::DimensionMismatch, "lambda must have p entries");
  if (static_cast<int>(spec.gamma.size()) != spec.n)
    throw Error(ErrorCode::DimensionMismatch, "gamma must have n entries");
  if (spec.beta != 1 && spec.beta != 2)
    throw Error(ErrorCode::BadBeta, "beta must be 1 or 2");
  for (double v : spec.lambda)
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::NonPositiveEigenvalue, "lambda entries must be positive");
  for (double v : spec.gamma)
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::NonPositiveEigenvalue, "gamma entries must be positive");
  ValidatedSpec out;
  out.spec = spec;
  out.lambda_mult = multiplicities(spec.lambda, gap, out.lambda_distinct);
  out.gamma_mult = multiplicities(spec.gamma, gap, out.gamma_distinct);
  return out;
}

double SignedLog::value() const { return sign * std::exp(log_abs); }

SignedLog normalization_constant(const EnsembleSpec& spec) {
  validate_spec(spec);
  const double b = spec.beta;
  double sl = 0.0, sg = 0.0;
  for (double v : spec.lambda) sl += std::log(v);
  for (double v : spec.gamma) sg += std::log(v);
  SignedLog k;
  k.log_abs = -(b * spec.n * spec.p / 2.0) * std::log(2.0 * std::numbers::pi / b) -
              (b / 2.0) * (spec.n * sl + spec.p * sg);
  return k;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::ComplexExact: return "ComplexExact";
    case Method::Character: return "Character";
    case Method::RealQuad: return "RealQuad";
    case Method::RealDegenerate: return "RealDegenerate";
    case Method::LargeN: return "LargeN";
    case Method::MarchenkoPastur: return "MarchenkoPastur";
    case Method::MonteCarlo: return "MonteCarlo";
  }
  return "Unknown";
}

Method method_from_name(const std::string& name) {
  for (Method m : {Method::ComplexExact, Method::Character, Method::RealQuad,
                   Method::RealDegenerate, Method::LargeN, Method::MarchenkoPastur,
                   Method::MonteCarlo})
    if (name == method_name(m)) return m;
  throw Error(ErrorCode::BadConfig, "unknown method " + name);
}

DensityCurve dual_density_transform(const DensityCurve& curve) {
  if (curve.dual)
    throw Error(ErrorCode::BadConfig, "curve is already a dual density");
  const int p = curve.spec.p, n = curve.spec.n;
  if (p > n)
    throw Error(ErrorCode::UnsupportedRegime, "dual transform needs p <= n (PGreaterThanN)");
  DensityCurve out = curve;
  const double r = static_cast<double>(p) / n;
  for (double& v : out.values) v *= r;
  for (double& e : out.errors) e *= r;
  out.delta_mass_at_zero = 1.0 - r;
  out.dual = true;
  return out;
}

DensityCurve rescale_density(const DensityCurve& curve, double divisor) {
  if (!(divisor > 0.0)) throw Error(ErrorCode::BadConfig, "divisor must be positive");
  DensityCurve out = curve;
  for (double& x : out.grid) x /= divisor;
  for (double& x : out.bin_edges) x /= divisor;
  for (double& v : out.values) v *= divisor;
  for (double& e : out.errors) e *= divisor;
  return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

double default_x_max(const EnsembleSpec& spec) {
  double m = 0.0;
  for (double l : spec.lambda)
    for (double g : spec.gamma) m = std::max(m, l * g);
  const double r = std::sqrt(double(spec.p)) + std::sqrt(double(spec.n));
  return 1.2 * m * r * r;
}

std::vector<double> linear_grid(double a, double b, std::size_t count) {
  if (count < 2 || !(b > a)) throw Error(ErrorCode::EmptyRange, "grid needs b > a and count >= 2");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = a + (b - a) * double(i) / double(count - 1);
  return g;
}

std::vector<double> default_grid(const EnsembleSpec& spec, std::size_t count) {
  const double xmax = default_x_max(spec);
  const std::size_t nlog = std::max<std::size_t>(count / 5, 4);
  const std::size_t nlin = std::max<std::size_t>(count - nlog, 2);
  const double h = xmax / double(nlin);
  std::vector<double> g;
  const double lo = std::log(h * 1e-4), hi = std::log(h);
  for (std::size_t i = 0; i < nlog; ++i)
    g.push_back(std::exp(lo + (hi - lo) * double(i) / double(nlog)));
  for (std::size_t i = 1; i <= nlin; ++i) g.push_back(h * double(i));
  return g;
}

}  // namespace wishart
