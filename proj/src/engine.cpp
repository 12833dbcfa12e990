#include "wishart/engine.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <memory>

#include "wishart/asymptotics.hpp"
#include "wishart/character.hpp"
#include "wishart/complex_density.hpp"
#include "wishart/montecarlo.hpp"
#include "wishart/parallel.hpp"

namespace wishart {

namespace {

bool pairs_of(const Multiplicity& m, std::vector<double>& out) {
  out.clear();
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (m.counts[i] != 2) return false;
    out.push_back(m.values[i]);
  }
  return true;
}

void fill(DensityCurve& c, const std::vector<double>& grid,
          const std::function<std::pair<double, double>(double)>& f) {
  c.grid = grid;
  c.values.assign(grid.size(), 0.0);
  c.errors.assign(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const auto [v, e] = f(grid[i]);
    c.values[i] = v;
    c.errors[i] = e;
  });
}

}  // namespace

bool pair_structure(const EnsembleSpec& spec, DegeneratePairSpec& pairs) {
  const ValidatedSpec v = validate_spec(spec);
  return pairs_of(v.lambda_mult, pairs.lambda_pairs) && pairs_of(v.gamma_mult, pairs.gamma_pairs);
}

void check_method(const EnsembleSpec& spec, Method method) {
  validate_spec(spec);
  switch (method) {
    case Method::ComplexExact:
    case Method::Character:
    case Method::LargeN:
      if (spec.beta != 2) throw Error(ErrorCode::BadBeta, std::string(method_name(method)) + " needs beta = 2");
      if (spec.p > spec.n) throw Error(ErrorCode::UnsupportedRegime, "complex formulas need p <= n");
      if (method == Method::Character && spec.p == spec.n)
        throw Error(ErrorCode::UnsupportedRegime, "character formula needs n > p");
      break;
    case Method::RealQuad:
      if (spec.beta != 1) throw Error(ErrorCode::BadBeta, "RealQuad needs beta = 1");
      break;
    case Method::RealDegenerate: {
      if (spec.beta != 1) throw Error(ErrorCode::BadBeta, "RealDegenerate needs beta = 1");
      DegeneratePairSpec pairs;
      if (!pair_structure(spec, pairs))
        throw Error(ErrorCode::UnsupportedRegime, "RealDegenerate needs every eigenvalue twice");
      break;
    }
    case Method::MarchenkoPastur:
      if (spec.p > spec.n) throw Error(ErrorCode::UnsupportedRegime, "Marchenko-Pastur form needs p <= n");
      break;
    case Method::MonteCarlo:
      break;
  }
}

DensityCurve compute_curve(const EnsembleSpec& spec, Method method, const std::vector<double>& grid,
                           const CurveOptions& opts) {
  check_method(spec, method);
  if (grid.empty()) throw Error(ErrorCode::EmptyRange, "empty grid");
  DensityCurve c;
  c.method = method;
  c.spec = spec;
  switch (method) {
    case Method::ComplexExact: {
      const ValidatedSpec v = validate_spec(spec);
      if (v.distinct()) {
        const ComplexDensityPlan plan = make_complex_plan(spec);
        fill(c, grid, [&](double x) {
          const DensityValue d = density_exact_c2_detail(plan, x);
          return std::make_pair(d.value, d.error);
        });
      } else {
        const ConfluentDensity dens(spec);
        fill(c, grid, [&](double x) {
          const DensityValue d = dens(x);
          return std::make_pair(d.value, d.error);
        });
        c.meta["confluent"] = 1.0;
      }
      break;
    }
    case Method::Character: {
      const CharacterPlan plan = make_character_plan(spec, opts.corrected);
      fill(c, grid, [&](double x) {
        const double v = opts.extended ? density_character_extended(plan, x) : density_character(plan, x);
        return std::make_pair(v, 0.0);
      });
      c.meta["corrected"] = opts.corrected ? 1.0 : 0.0;
      c.meta["extended"] = opts.extended ? 1.0 : 0.0;
      break;
    }
    case Method::RealQuad:
      fill(c, grid, [&](double x) {
        const RealQuadResult r = density_quad_r1(spec, x, opts.quad);
        return std::make_pair(r.value, r.error);
      });
      c.meta["eps"] = opts.quad.eps;
      break;
    case Method::RealDegenerate: {
      DegeneratePairSpec pairs;
      pair_structure(spec, pairs);
      RealTerms rest;
      rest.t1 = false;
      fill(c, grid, [&](double x) {
        const RealQuadResult a = reduced_s11_degenerate(pairs, x, opts.quad);
        const RealQuadResult b = density_quad_r1(spec, x, opts.quad, rest);
        return std::make_pair(a.value + b.value, a.error + b.error);
      });
      break;
    }
    case Method::LargeN: {
      const double gbar = effective_mean(spec.gamma);
      fill(c, grid, [&](double x) {
        return std::make_pair(density_large_n(spec.lambda, gbar, spec.n, x), 0.0);
      });
      c.meta["gamma_bar"] = gbar;
      break;
    }
    case Method::MarchenkoPastur: {
      const double lbar = effective_mean(spec.lambda), gbar = effective_mean(spec.gamma);
      fill(c, grid, [&](double x) {
        return std::make_pair(marchenko_pastur(x, spec.p, spec.n, lbar, gbar), 0.0);
      });
      c.meta["lambda_bar"] = lbar;
      c.meta["gamma_bar"] = gbar;
      break;
    }
    case Method::MonteCarlo: {
      McConfig mc;
      mc.spec = spec;
      mc.samples = opts.samples;
      mc.seed = opts.seed;
      const auto values = sample_wishart(mc);
      const double lo = std::min(0.0, grid.front());
      c = histogram_density(values, uniform_edges(lo, grid.back(), opts.bins));
      c.spec = spec;
      c.meta["seed"] = static_cast<double>(opts.seed);
      c.meta["samples"] = static_cast<double>(opts.samples);
      break;
    }
  }
  if (method == Method::Character || method == Method::LargeN || method == Method::MarchenkoPastur)
    c.errors.clear();
  return c;
}

}  // namespace wishart
