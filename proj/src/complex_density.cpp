#include "wishart/complex_density.hpp"

#include <cmath>
#include <limits>

#include "wishart/symfunc.hpp"

namespace wishart {

namespace {

double pow2_near(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::log2(x);
  return std::ldexp(1.0, static_cast<int>(std::lround(s / double(v.size()))));
}

template <class T>
void fill_tables(ComplexDensityPlan::Tables<T>& t, const std::vector<double>& lam,
                 const std::vector<double>& gam) {
  const int p = static_cast<int>(lam.size()), n = static_cast<int>(gam.size());
  t.lambda.assign(lam.begin(), lam.end());
  t.gamma.assign(gam.begin(), gam.end());
  t.e_lambda = elementary_symmetric_all(t.lambda);
  t.e_gamma = elementary_symmetric_all(t.gamma);
  t.e_lambda_excl.resize(p);
  t.e_gamma_excl.resize(n);
  for (int m = 0; m < p; ++m) t.e_lambda_excl[m] = elementary_symmetric_all(t.lambda, {m});
  for (int k = 0; k < n; ++k) t.e_gamma_excl[k] = elementary_symmetric_all(t.gamma, {k});
  auto deltas = [](const std::vector<T>& v, std::vector<T>& delta, std::vector<std::vector<T>>& inv) {
    const std::size_t len = v.size();
    delta.assign(len, T(1.0));
    inv.assign(len, std::vector<T>(len, T(0.0)));
    for (std::size_t l = 0; l < len; ++l)
      for (std::size_t j = 0; j < len; ++j) {
        if (j == l) continue;
        const T d = T(1.0) / v[l] - T(1.0) / v[j];
        delta[l] *= d;
        inv[l][j] = T(1.0) / d;
      }
  };
  deltas(t.lambda, t.delta_lambda, t.inv_diff_lambda);
  deltas(t.gamma, t.delta_gamma, t.inv_diff_gamma);
  T prod = T(double(p));
  for (const T& v : t.lambda) prod *= v;
  for (const T& v : t.gamma) prod *= v;
  if ((p + n) % 2) prod = -prod;
  t.prefactor = T(1.0) / prod;
}

template <class T>
struct Eval {
  T value;
  T magnitude;
};

template <class T>
Eval<T> evaluate(const ComplexDensityPlan::Tables<T>& t, T x) {
  using std::abs;
  using std::exp;
  const int p = static_cast<int>(t.lambda.size()), n = static_cast<int>(t.gamma.size());
  std::vector<T> xp(p + 1, T(1.0)), fact(p + 1, T(1.0));
  for (int i = 1; i <= p; ++i) {
    xp[i] = xp[i - 1] * x;
    fact[i] = fact[i - 1] * T(double(i));
  }
  const T inv_x_pm1 = T(1.0) / xp[p - 1];
  const T inv_x_p = T(1.0) / xp[p];

  // ex[k][l] = exp(-x / (G_k L_l))
  std::vector<std::vector<T>> ex(n, std::vector<T>(p));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < p; ++l) ex[k][l] = exp(-x / (t.gamma[k] * t.lambda[l]));

  Neumaier<T> acc;
  T mag = T(0.0);

  T s = T(0.0), s_abs = T(0.0);
  for (int u = 0; u < p; ++u) {
    T term = t.e_gamma[u] * fact[u] * t.e_lambda[u] * T(double(p - u)) * xp[p - u - 1];
    if (u % 2) term = -term;
    s += term;
    s_abs += abs(term);
  }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < p; ++l) {
      const T w = ex[k][l] * inv_x_pm1 / (t.delta_lambda[l] * t.delta_gamma[k]);
      acc.add(w * s);
      mag += abs(w) * s_abs;
    }

  if (p >= 2) {
    // br2[k][q]: bracket with the doubled Gamma_k node at 1/Lambda_q.
    std::vector<std::vector<T>> br2(n, std::vector<T>(p));
    for (int k = 0; k < n; ++k)
      for (int q = 0; q < p; ++q) {
        const T bq = T(1.0) / t.lambda[q];
        T v = -x * bq * ex[k][q] / t.delta_gamma[k];
        for (int l = 0; l < n; ++l) {
          if (l == k) continue;
          v += ex[l][q] / t.delta_gamma[l] * t.inv_diff_gamma[l][k];
          v -= ex[k][q] / t.delta_gamma[k] * t.inv_diff_gamma[k][l];
        }
        br2[k][q] = v;
      }
    for (int k = 0; k < n; ++k) {
      const T ak = T(1.0) / t.gamma[k];
      for (int m = 0; m < p; ++m) {
        const T bm = T(1.0) / t.lambda[m];
        T b1 = -(x * bm * ak - T(1.0)) * ex[k][m] / t.delta_gamma[k];
        for (int l = 0; l < n; ++l) {
          if (l == k) continue;
          const T al = T(1.0) / t.gamma[l];
          b1 += ex[l][m] * al / t.delta_gamma[l] * t.inv_diff_gamma[l][k];
          b1 -= ex[k][m] * ak / t.delta_gamma[k] * t.inv_diff_gamma[k][l];
        }
        const T lg = t.lambda[m] * t.gamma[k];
        T br = lg * inv_x_pm1 / t.delta_lambda[m] * b1;
        T br_abs = abs(br);
        for (int q = 0; q < p; ++q) {
          if (q == m) continue;
          const T c = lg * inv_x_p * t.inv_diff_lambda[m][q];
          const T t1 = c * br2[k][m] / t.delta_lambda[m];
          const T t2 = c * br2[k][q] / t.delta_lambda[q];
          br += t1 + t2;
          br_abs += abs(t1) + abs(t2);
        }
        T us = T(0.0), us_abs = T(0.0);
        for (int u = 0; u <= p - 2; ++u) {
          T term = t.e_gamma_excl[k][u] * t.e_lambda_excl[m][u] * fact[u] * T(double(p - u - 1)) *
                   xp[p - u - 2];
          if (u % 2) term = -term;
          us += term;
          us_abs += abs(term);
        }
        acc.add(br * us);
        mag += br_abs * us_abs;
      }
    }
  }
  return {t.prefactor * acc.value(), abs(t.prefactor) * mag};
}

}  // namespace

ComplexDensityPlan make_complex_plan(const EnsembleSpec& spec, double gap) {
  const ValidatedSpec v = validate_spec(spec, gap);
  if (spec.beta != 2) throw Error(ErrorCode::BadBeta, "closed form needs beta = 2");
  if (spec.p > spec.n)
    throw Error(ErrorCode::UnsupportedRegime, "closed form needs p <= n");
  if (!v.distinct())
    throw Error(ErrorCode::DegenerateEigenvalues, "closed form needs distinct eigenvalues");
  for (int l = 0; l < spec.p; ++l) delta_product(spec.lambda, l, gap);
  for (int k = 0; k < spec.n; ++k) delta_product(spec.gamma, k, gap);
  ComplexDensityPlan plan;
  plan.spec = spec;
  const double sl = pow2_near(spec.lambda), sg = pow2_near(spec.gamma);
  plan.scale = sl * sg;
  std::vector<double> lam = spec.lambda, gam = spec.gamma;
  for (double& x : lam) x /= sl;
  for (double& x : gam) x /= sg;
  fill_tables(plan.d, lam, gam);
  fill_tables(plan.dd, lam, gam);
  double mn = std::numeric_limits<double>::infinity();
  for (double a : spec.lambda)
    for (double b : spec.gamma) mn = std::min(mn, a * b);
  plan.x_floor = 1e-8 * mn;
  return plan;
}

namespace {

DensityValue evaluate_raw(const ComplexDensityPlan& plan, double x, Precision precision) {
  const double xs = x / plan.scale;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  DensityValue out;
  if (precision == Precision::Double) {
    const Eval<double> e = evaluate(plan.d, xs);
    out.value = e.value / plan.scale;
    out.error = 4.0 * eps * e.magnitude / plan.scale;
    return out;
  }
  const Eval<DoubleDouble> e = evaluate(plan.dd, DoubleDouble(xs));
  const double v = to_double(e.value);
  out.value = v / plan.scale;
  out.extended = true;
  if (precision == Precision::Extended) {
    out.error = (4.0 * eps * eps * to_double(e.magnitude) + eps * std::abs(v)) / plan.scale;
    return out;
  }
  const Eval<double> d = evaluate(plan.d, xs);
  const double diff = std::abs(d.value - v);
  // Double result is good enough when it agrees with the extended one.
  if (diff <= 1e-13 * std::abs(v)) {
    out.value = d.value / plan.scale;
    out.error = std::max(diff, 4.0 * eps * std::abs(d.value)) / plan.scale;
    out.extended = false;
    return out;
  }
  out.error = (std::max(diff * eps, 4.0 * eps * eps * to_double(e.magnitude)) + eps * std::abs(v)) /
              plan.scale;
  return out;
}

DensityValue power_tail(const ComplexDensityPlan& plan, double x, double x_ref, Precision precision) {
  const int k = plan.spec.n - plan.spec.p;
  const DensityValue r1 = evaluate_raw(plan, x_ref, precision);
  const DensityValue r2 = evaluate_raw(plan, 2.0 * x_ref, precision);
  DensityValue out;
  out.extended = r1.extended;
  out.value = r1.value * std::pow(x / x_ref, k);
  const double alt = r2.value * std::pow(x / (2.0 * x_ref), k);
  out.error = std::abs(out.value - alt) + r1.error * std::pow(x / x_ref, k);
  return out;
}

}  // namespace

DensityValue density_exact_c2_detail(const ComplexDensityPlan& plan, double x, Precision precision,
                                     double tolerance) {
  if (!(x > 0.0)) throw Error(ErrorCode::BadConfig, "density needs x > 0");
  DensityValue out;
  if (x < plan.x_floor) {
    out = power_tail(plan, x, plan.x_floor, precision);
  } else {
    out = evaluate_raw(plan, x, precision);
    if (precision != Precision::Double && out.error > tolerance * std::abs(out.value)) {
      // Cancellation near zero exhausted the working precision; walk out to an accurate point.
      // The leading power law only holds deep inside the small-x regime.
      const double x_limit = 1e5 * plan.x_floor;
      double x_ref = x;
      DensityValue r = out;
      while (r.error > tolerance * std::abs(r.value) && x_ref * 1.25 <= x_limit) {
        x_ref *= 1.25;
        r = evaluate_raw(plan, x_ref, precision);
      }
      if (x_ref != x && r.error <= tolerance * std::abs(r.value))
        out = power_tail(plan, x, x_ref, precision);
    }
  }
  if (out.value < 0.0) {
    if (-out.value > 10.0 * out.error + 1e-300)
      throw Error(ErrorCode::NegativeDensity, "closed form returned a negative density");
    out.value = 0.0;
  }
  return out;
}

double density_exact_c2(const ComplexDensityPlan& plan, double x) {
  return density_exact_c2_detail(plan, x).value;
}

DensityValue density_degenerate_c2(const EnsembleSpec& spec, double x, const DegenerateOptions& opts) {
  const ValidatedSpec v = validate_spec(spec);
  if (spec.beta != 2) throw Error(ErrorCode::BadBeta, "closed form needs beta = 2");
  auto split = [](const std::vector<double>& vals, const Multiplicity& m, double eps) {
    std::vector<double> out = vals;
    std::vector<int> seen(m.values.size(), 0);
    for (double& x : out) {
      std::size_t g = 0;
      while (g < m.values.size() && std::abs(x - m.values[g]) > 1e-8 * std::max(x, m.values[g])) ++g;
      const double offset = seen[g] - 0.5 * (m.counts[g] - 1);
      ++seen[g];
      x = m.values[g] * (1.0 + eps * offset);
    }
    return out;
  };
  if (v.distinct()) {
    const ComplexDensityPlan plan = make_complex_plan(spec);
    return density_exact_c2_detail(plan, x);
  }
  const int steps = std::max(opts.steps, 3);
  std::vector<double> h2, vals, errs;
  for (int i = 0; i < steps; ++i) {
    const double le = std::log10(opts.eps_max) +
                      (std::log10(opts.eps_min) - std::log10(opts.eps_max)) * i / double(steps - 1);
    const double eps = std::pow(10.0, le);
    EnsembleSpec s = spec;
    s.lambda = split(spec.lambda, v.lambda_mult, eps);
    s.gamma = split(spec.gamma, v.gamma_mult, eps);
    const ComplexDensityPlan plan = make_complex_plan(s, 1e-12);
    const DensityValue r = evaluate_raw(plan, x, Precision::Extended);
    h2.push_back(eps * eps);
    vals.push_back(r.value);
    errs.push_back(r.error);
  }
  // Neville tableau towards eps^2 = 0, stopping when the corrections stop contracting.
  std::vector<double> t = vals;
  double best = vals.back(), best_err = std::abs(vals.back() - vals[vals.size() - 2]);
  double prev_err = std::numeric_limits<double>::infinity();
  for (int m = 1; m < steps; ++m) {
    for (int i = steps - 1; i >= m; --i)
      t[i] = t[i] + (t[i] - t[i - 1]) * h2[i] / (h2[i - m] - h2[i]);
    const double e = std::abs(t[steps - 1] - t[steps - 2]);
    if (e < best_err) {
      best = t[steps - 1];
      best_err = e;
    }
    if (e > prev_err && m > 2) break;
    prev_err = e;
  }
  double noise = 0.0;
  for (double e : errs) noise = std::max(noise, e);
  DensityValue out;
  out.value = best;
  out.error = best_err + noise;
  out.extended = true;
  if (!(out.error <= 1e-3 * std::abs(out.value) + 1e-300) || !std::isfinite(out.value))
    throw Error(ErrorCode::ExtrapolationDiverged, "eps-split extrapolation did not contract");
  if (out.value < 0.0) out.value = 0.0;
  return out;
}

}  // namespace wishart
