#include <cmath>
#include <string>
#include <limits>

#include "wishart/complex_density.hpp"
#include "wishart/symfunc.hpp"

namespace wishart {

namespace {

using R = DoubleDouble;
using Series = std::vector<R>;

Series mul(const Series& a, const Series& b, std::size_t order) {
  Series c(order + 1, R(0.0));
  for (std::size_t i = 0; i < a.size() && i <= order; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= order; ++j) c[i + j] += a[i] * b[j];
  return c;
}

// (d + s)^(-m) to the given order.
Series inv_power(R d, int m, std::size_t order) {
  Series c(order + 1);
  R base = R(1.0);
  for (int i = 0; i < m; ++i) base /= d;
  c[0] = base;
  for (std::size_t j = 1; j <= order; ++j)
    c[j] = -c[j - 1] * R(double(m + j - 1)) / (R(double(j)) * d);
  return c;
}

R ipow(R v, int e) {
  R r = R(1.0);
  const bool neg = e < 0;
  for (int i = 0; i < std::abs(e); ++i) r *= v;
  return neg ? R(1.0) / r : r;
}

struct Node {
  R value;  // distinct value of a = 1/Gamma or b = 1/Lambda
  int mult;
};

std::vector<Node> distinct_nodes(const Multiplicity& m, double scale) {
  std::vector<Node> out;
  for (std::size_t i = 0; i < m.values.size(); ++i)
    out.push_back({R(1.0) / R(m.values[i] / scale), m.counts[i]});
  return out;
}

// prod_{other nodes} (node - other + s)^(-mult) as a series in s.
Series rest_product(const std::vector<Node>& nodes, std::size_t r, std::size_t order) {
  Series h(order + 1, R(0.0));
  h[0] = R(1.0);
  for (std::size_t g = 0; g < nodes.size(); ++g) {
    if (g == r) continue;
    h = mul(h, inv_power(nodes[r].value - nodes[g].value, nodes[g].mult, order), order);
  }
  return h;
}

double pow2_near(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::log2(x);
  return std::ldexp(1.0, static_cast<int>(std::lround(s / double(v.size()))));
}

}  // namespace

struct ConfluentPlan {
  int p = 0, n = 0;
  double scale = 1.0;
  double x_floor = 0.0;
  std::vector<Node> a, b;
  std::vector<R> e_gamma, e_lambda;
  R prefactor;
  // Same ensemble under a different rescaling; rounding differs, exact value does not.
  std::shared_ptr<const ConfluentPlan> twin;
  // Laurent coefficient vectors; index j holds the coefficient of s^(-j-1).
  std::vector<Series> phi_a;                  // [r]
  std::vector<std::vector<Series>> phi_b1;    // [i][r]
  std::vector<std::vector<Series>> phi_b2;    // [i][r]
  std::vector<Series> psi_a;                  // [s]
  std::vector<std::vector<Series>> psi_b1;    // [i'][s]
  std::vector<std::vector<Series>> psi_b2;    // [i'][s]
};

namespace {

Series laurent(const Series& regular, int pole_order) {
  // regular * s^(-pole_order); coefficient of s^(-j-1) is regular[pole_order-1-j].
  Series out(pole_order + 1, R(0.0));
  for (int j = 0; j < pole_order; ++j) out[j] = regular[pole_order - 1 - j];
  return out;
}

std::shared_ptr<ConfluentPlan> build(const EnsembleSpec& spec, double tweak) {
  const ValidatedSpec v = validate_spec(spec);
  if (spec.beta != 2) throw Error(ErrorCode::BadBeta, "closed form needs beta = 2");
  if (spec.p > spec.n) throw Error(ErrorCode::UnsupportedRegime, "closed form needs p <= n");
  auto plan = std::make_shared<ConfluentPlan>();
  const int p = spec.p, n = spec.n;
  plan->p = p;
  plan->n = n;
  const double sl = pow2_near(spec.lambda) * tweak, sg = pow2_near(spec.gamma);
  plan->scale = sl * sg;
  double mn = std::numeric_limits<double>::infinity();
  for (double l : spec.lambda)
    for (double g : spec.gamma) mn = std::min(mn, l * g);
  plan->x_floor = 1e-8 * mn;
  plan->a = distinct_nodes(v.gamma_mult, sg);
  plan->b = distinct_nodes(v.lambda_mult, sl);

  std::vector<R> lam, gam;
  for (double l : spec.lambda) lam.push_back(R(l / sl));
  for (double g : spec.gamma) gam.push_back(R(g / sg));
  plan->e_lambda = elementary_symmetric_all(lam);
  plan->e_gamma = elementary_symmetric_all(gam);
  R prod = R(double(p));
  for (const R& x : lam) prod *= x;
  for (const R& x : gam) prod *= x;
  if ((p + n) % 2) prod = -prod;
  plan->prefactor = R(1.0) / prod;

  const int imax = std::max(p - 2, -1);
  // v side
  plan->phi_b1.assign(imax + 1, {});
  plan->phi_b2.assign(imax + 1, {});
  for (std::size_t r = 0; r < plan->a.size(); ++r) {
    const int m = plan->a[r].mult;
    const R alpha = plan->a[r].value;
    const Series h = rest_product(plan->a, r, m + 1);
    plan->phi_a.push_back(laurent(h, m));
    for (int i = 0; i <= imax; ++i) {
      // s * sigma_i(alpha + s)
      Series sig(m + 2, R(0.0));
      sig[0] = R(double(m)) * ipow(alpha, -i - 1);
      for (std::size_t g = 0; g < plan->a.size(); ++g) {
        if (g == r) continue;
        const R d = alpha - plan->a[g].value;
        const R c = R(double(plan->a[g].mult)) * ipow(plan->a[g].value, -i - 1);
        R dp = d;
        for (int j = 0; j <= m; ++j) {
          R term = c / dp;
          if (j % 2) term = -term;
          sig[j + 1] += term;
          dp *= d;
        }
      }
      const Series sh = mul(sig, h, m + 1);
      const Series vsh = mul(Series{alpha, R(1.0)}, sh, m + 1);
      plan->phi_b2[i].push_back(laurent(sh, m + 1));
      plan->phi_b1[i].push_back(laurent(vsh, m + 1));
    }
  }
  // w side
  std::vector<R> power_sums(p + 1, R(0.0));
  for (int t = 0; t <= p; ++t)
    for (const R& l : lam) power_sums[t] += ipow(l, t);
  plan->psi_b1.assign(imax + 1, {});
  plan->psi_b2.assign(imax + 1, {});
  for (std::size_t s = 0; s < plan->b.size(); ++s) {
    const int m = plan->b[s].mult;
    const R beta = plan->b[s].value;
    const Series k = rest_product(plan->b, s, m);
    plan->psi_a.push_back(laurent(k, m));
    for (int i = 0; i <= imax; ++i) {
      // w^(-i-1)
      const Series wi = inv_power(beta, i + 1, m);
      plan->psi_b1[i].push_back(laurent(mul(wi, k, m), m));
      // kappa(w) + (i+1) w^(-i-2), kappa(w) = -sum_{j<=i} w^(j-i-1) P_{j+1}
      Series g = inv_power(beta, i + 2, m);
      for (R& c : g) c *= R(double(i + 1));
      for (int j = 0; j <= i; ++j) {
        const Series wj = inv_power(beta, i + 1 - j, m);
        for (int q = 0; q <= m; ++q) g[q] -= wj[q] * power_sums[j + 1];
      }
      plan->psi_b2[i].push_back(laurent(mul(g, k, m), m));
    }
  }
  return plan;
}

struct EvalOut {
  R value;
  R magnitude;
};

EvalOut evaluate(const ConfluentPlan& pl, R x) {
  const int p = pl.p;
  const int imax = p - 2;
  std::vector<R> xp(p + 1, R(1.0)), fact(std::max(p, 1) + 1, R(1.0));
  for (int i = 1; i <= p; ++i) xp[i] = xp[i - 1] * x;
  for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * R(double(i));

  // Taylor tables [s^j t^k] exp(-x (alpha+s)(beta+t)) and their absolute-term bounds.
  const std::size_t nr = pl.a.size(), ns = pl.b.size();
  using Table = std::vector<std::vector<R>>;
  std::vector<std::vector<Table>> E(nr, std::vector<Table>(ns)), Emag(nr, std::vector<Table>(ns));
  for (std::size_t r = 0; r < nr; ++r) {
    const int mr = pl.a[r].mult;
    const R alpha = pl.a[r].value;
    for (std::size_t s = 0; s < ns; ++s) {
      const int ms = pl.b[s].mult;
      const R beta = pl.b[s].value;
      const R base = exp(-x * alpha * beta);
      // powers (-x beta)^i / i!, (-x alpha)^k / k!, (-x)^l / l!
      const int top = std::max(mr, ms) + 1;
      std::vector<R> pb(top + 1), pa(top + 1), px(top + 1);
      pb[0] = pa[0] = px[0] = R(1.0);
      for (int i = 1; i <= top; ++i) {
        pb[i] = pb[i - 1] * (-x * beta) / R(double(i));
        pa[i] = pa[i - 1] * (-x * alpha) / R(double(i));
        px[i] = px[i - 1] * (-x) / R(double(i));
      }
      auto& tab = E[r][s];
      auto& tmag = Emag[r][s];
      tab.assign(mr + 1, std::vector<R>(ms + 1, R(0.0)));
      tmag = tab;
      for (int j = 0; j <= mr; ++j)
        for (int k = 0; k <= ms; ++k) {
          R acc = R(0.0), mag = R(0.0);
          for (int l = 0; l <= std::min(j, k); ++l) {
            const R t = px[l] * pb[j - l] * pa[k - l];
            acc += t;
            mag += abs(t);
          }
          tab[j][k] = base * acc;
          tmag[j][k] = base * mag;
        }
    }
  }
  auto pair = [&](const std::vector<Series>& phi, const std::vector<Series>& psi, R& mag) {
    R total = R(0.0);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t s = 0; s < ns; ++s) {
        const auto& tab = E[r][s];
        const auto& tmag = Emag[r][s];
        for (std::size_t j = 0; j < phi[r].size(); ++j) {
          if (phi[r][j] == R(0.0)) continue;
          R row = R(0.0);
          R rowmag = R(0.0);
          for (std::size_t k = 0; k < psi[s].size(); ++k) {
            row += tab[j][k] * psi[s][k];
            rowmag += tmag[j][k] * abs(psi[s][k]);
          }
          total += phi[r][j] * row;
          mag += abs(phi[r][j]) * rowmag;
        }
      }
    return total;
  };

  R mag = R(0.0);
  R sA = R(0.0), sA_abs = R(0.0);
  for (int u = 0; u < p; ++u) {
    R term = pl.e_gamma[u] * fact[u] * pl.e_lambda[u] * R(double(p - u)) * xp[p - u - 1];
    if (u % 2) term = -term;
    sA += term;
    sA_abs += abs(term);
  }
  R magA = R(0.0);
  const R ia = pair(pl.phi_a, pl.psi_a, magA);
  R total = sA / xp[p - 1] * ia;
  mag += sA_abs / xp[p - 1] * magA;

  for (int i = 0; i <= imax; ++i)
    for (int ip = 0; ip <= imax; ++ip) {
      R w = R(0.0), wmag = R(0.0);
      for (int u = std::max(i, ip); u <= imax; ++u) {
        R c = fact[u] * R(double(p - u - 1)) * xp[p - u - 2] * pl.e_gamma[u - i] * pl.e_lambda[u - ip];
        if ((u + i + ip) % 2) c = -c;
        w += c;
        wmag += abs(c);
      }
      R m1 = R(0.0), m2 = R(0.0);
      const R i1 = pair(pl.phi_b1[i], pl.psi_b1[ip], m1);
      const R i2 = pair(pl.phi_b2[i], pl.psi_b2[ip], m2);
      total += w * (i1 / xp[p - 1] + i2 / xp[p]);
      mag += wmag * (m1 / xp[p - 1] + m2 / xp[p]);
    }
  return {pl.prefactor * total, abs(pl.prefactor) * mag};
}

DensityValue evaluate_scaled(const ConfluentPlan& pl, double x) {
  const EvalOut e = evaluate(pl, R(x / pl.scale));
  const EvalOut t = evaluate(*pl.twin, R(x / pl.twin->scale));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  DensityValue out;
  out.extended = true;
  const double v = to_double(e.value) / pl.scale, w = to_double(t.value) / pl.twin->scale;
  out.value = v;
  // The magnitude bound is far too pessimistic; use the spread between the two scalings,
  // capped by the bound.
  const double bound = 4.0 * eps * eps * to_double(e.magnitude) / pl.scale;
  out.error = std::min(bound, 8.0 * std::abs(v - w)) + eps * eps * std::abs(v);
  return out;
}

DensityValue power_tail(const ConfluentPlan& pl, double x, double x_ref) {
  const int k = pl.n - pl.p;
  const DensityValue r1 = evaluate_scaled(pl, x_ref);
  const DensityValue r2 = evaluate_scaled(pl, 2.0 * x_ref);
  DensityValue out;
  out.extended = true;
  out.value = r1.value * std::pow(x / x_ref, k);
  out.error = std::abs(out.value - r2.value * std::pow(x / (2.0 * x_ref), k)) +
              r1.error * std::pow(x / x_ref, k);
  return out;
}

}  // namespace

ConfluentDensity::ConfluentDensity(const EnsembleSpec& spec) {
  auto plan = build(spec, 1.0);
  plan->twin = build(spec, 0.75);
  plan_ = plan;
}

DensityValue ConfluentDensity::operator()(double x) const {
  if (!(x > 0.0)) throw Error(ErrorCode::BadConfig, "density needs x > 0");
  const double tol = 1e-9;
  DensityValue out;
  if (x < plan_->x_floor) {
    out = power_tail(*plan_, x, plan_->x_floor);
  } else {
    out = evaluate_scaled(*plan_, x);
    if (out.error > tol * std::abs(out.value)) {
      // The leading power law only holds deep inside the small-x regime.
      const double x_limit = 1e5 * plan_->x_floor;
      double x_ref = x;
      DensityValue r = out;
      while (r.error > tol * std::abs(r.value) && x_ref * 1.25 <= x_limit) {
        x_ref *= 1.25;
        r = evaluate_scaled(*plan_, x_ref);
      }
      if (x_ref != x && r.error <= tol * std::abs(r.value)) out = power_tail(*plan_, x, x_ref);
    }
  }
  // x·density is dimensionless, so x·error measures digits lost on the density's own scale.
  if (!std::isfinite(out.value) || !std::isfinite(out.error) ||
      (out.error > std::abs(out.value) && out.error * x > 1e-6))
    throw Error(ErrorCode::NotConverged, "confluent form lost all significant digits at x = " +
                                             std::to_string(x) + " (p = " + std::to_string(plan_->p) + ")");
  if (out.value < 0.0) {
    if (-out.value > 10.0 * out.error + 1e-300)
      throw Error(ErrorCode::NegativeDensity, "confluent form returned a negative density");
    out.value = 0.0;
  }
  return out;
}

DensityValue density_confluent_c2(const EnsembleSpec& spec, double x) {
  return ConfluentDensity(spec)(x);
}

}  // namespace wishart
