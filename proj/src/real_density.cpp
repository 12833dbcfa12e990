#include "wishart/real_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wishart/parallel.hpp"
#include "wishart/quadrature.hpp"
#include "wishart/specfun.hpp"
#include "wishart/symfunc.hpp"

namespace wishart {

namespace {

constexpr double kPi = std::numbers::pi;

double esym(const std::vector<double>& e, int u) {
  return u >= 0 && u < static_cast<int>(e.size()) ? e[u] : 0.0;
}

double factorial(int u) { return std::tgamma(u + 1.0); }

cplx checked_sqrt(cplx v) {
  if (v.imag() == 0.0 && v.real() < 0.0)
    throw Error(ErrorCode::BranchTrackingFailure, "square-root factor on the branch cut");
  return std::sqrt(v);
}

// prod_j sqrt([1 + i G_j (S+s)/2][1 + i G_j (S-s)/2]) and the Lambda analogue.
cplx gamma_root(const EnsembleSpec& spec, double S, double s) {
  cplx prod = 1.0;
  for (double g : spec.gamma)
    prod *= checked_sqrt(cplx(1.0, g * (S + s) / 2)) * checked_sqrt(cplx(1.0, g * (S - s) / 2));
  return prod;
}

cplx lambda_root(const EnsembleSpec& spec, cplx xm, double R, double r) {
  cplx prod = 1.0;
  for (double l : spec.lambda)
    prod *= checked_sqrt(xm - l * (R + r) / 2) * checked_sqrt(xm - l * (R - r) / 2);
  return prod;
}

void require_real(const EnsembleSpec& spec) {
  validate_spec(spec);
  if (spec.beta != 1) throw Error(ErrorCode::BadBeta, "real-case density needs beta = 1");
}

}  // namespace

void validate_quad_config(const RealQuadConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw Error(ErrorCode::BadConfig, "eps must be positive");
  if (!(cfg.tail_cut > 0.0)) throw Error(ErrorCode::BadConfig, "tail_cut must be positive");
  if (cfg.nodes < 16 || cfg.angle_nodes < 16)
    throw Error(ErrorCode::BadConfig, "node counts must be at least 16");
  if (!(cfg.tolerance > 0.0) || !(cfg.abs_tolerance >= 0.0))
    throw Error(ErrorCode::BadConfig, "tolerances must be positive");
  if (!(cfg.damping > 0.0 && cfg.damping < kPi / 2))
    throw Error(ErrorCode::BadConfig, "damping angle must lie in (0, pi/2)");
}

double s1_term_prefactor(int term, int p) {
  const double c = 1.0 / (512.0 * p * kPi * kPi);
  return term == 2 ? -2.0 * c : c;
}

cplx integrand_s11(double S, double s, double R, double r, const EnsembleSpec& spec, double x,
                   double eps) {
  require_real(spec);
  const int p = spec.p;
  const cplx xm(x, -eps);
  const auto el = elementary_symmetric_all(spec.lambda);
  const auto eg = elementary_symmetric_all(spec.gamma);
  double poly = 0.0;
  for (int u = 0; u < p; ++u)
    poly += std::pow(x, p - u - 1) * (u % 2 ? -1.0 : 1.0) * esym(el, u) * factorial(u) *
            esym(eg, u) * (p - u);
  const double front = std::abs(r) * std::abs(s) * bessel_j0(s * r / 4) * poly;
  if (front == 0.0) return 0.0;
  const cplx phase = std::exp(cplx(0.0, S * R / 4));
  return front * phase / (gamma_root(spec, S, s) * lambda_root(spec, xm, R, r));
}

cplx integrand_s12(double S, double s, double R, double r, const EnsembleSpec& spec, double x,
                   double eps, bool as_printed) {
  require_real(spec);
  const int p = spec.p, n = spec.n;
  if (p < 2) return 0.0;
  const cplx xm(x, -eps);
  const SymTable tl = make_sym_table(spec.lambda, false);
  const SymTable tg = make_sym_table(spec.gamma, false);
  const double j0 = bessel_j0(s * r / 4), j1 = bessel_j1(s * r / 4);
  const cplx bess = as_printed ? cplx(j0, -j1) : cplx(j0, j1);
  cplx sum = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < p; ++l) {
      double poly = 0.0;
      for (int u = 0; u <= p - 2; ++u)
        poly += std::pow(x, p - u - 2) * (u % 2 ? -1.0 : 1.0) * factorial(u) *
                esym(tl.e_excl[l], u) * esym(tg.e_excl[k], u) * (p - u - 1);
      const double gk = spec.gamma[k], ll = spec.lambda[l];
      sum += gk * gk * ll * ll * poly / (cplx(1.0, gk * (S - s) / 2) * (xm - ll * (R - r) / 2));
    }
  const cplx phase = std::exp(cplx(0.0, S * R / 4));
  return std::abs(r) * std::abs(s) * sum * phase * bess /
         (gamma_root(spec, S, s) * lambda_root(spec, xm, R, r));
}

cplx integrand_s13(double S, double s, double R, double r, const EnsembleSpec& spec, double x,
                   double eps) {
  require_real(spec);
  const int p = spec.p, n = spec.n;
  if (p < 3 || n < 2) return 0.0;
  const cplx xm(x, -eps);
  const SymTable tl = make_sym_table(spec.lambda, true);
  const SymTable tg = make_sym_table(spec.gamma, true);
  cplx sum = 0.0;
  for (int u = 0; u <= p - 3; ++u) {
    const double a = std::pow(x, p - u - 3) * (u % 2 ? -1.0 : 1.0) * factorial(u) * (p - u - 2);
    for (int m = 0; m < p; ++m)
      for (int nn = 0; nn < p; ++nn) {
        if (m == nn) continue;
        const double lm = spec.lambda[m], ln = spec.lambda[nn];
        const cplx lam = lm * lm * ln * ln * esym(tl.e_excl2[m][nn], u) /
                         ((xm - lm * (R - r) / 2) * (xm - ln * (R + r) / 2));
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            if (k == l) continue;
            const double gk = spec.gamma[k], gl = spec.gamma[l];
            sum += a * lam * gk * gk * gl * gl * esym(tg.e_excl2[k][l], u) /
                   (cplx(1.0, gk * (S + s) / 2) * cplx(1.0, gl * (S - s) / 2));
          }
      }
  }
  const cplx phase = std::exp(cplx(0.0, S * R / 4));
  return std::abs(r) * std::abs(s) * bessel_j0(s * r / 4) * sum * phase /
         (gamma_root(spec, S, s) * lambda_root(spec, xm, R, r));
}

namespace {

// One radial axis on the rotated ray c = omega u: nodes u and complex weights that
// already carry omega e^{-omega u / (2 Gamma)} / (2 Gamma).
struct RadialRule {
  std::vector<double> u;
  std::vector<cplx> w;
};

RadialRule radial_rule(double gamma, double x, const std::vector<double>& lambda, cplx omega,
                       const RealQuadConfig& cfg, int nodes) {
  const double decay = omega.real() / (2 * gamma);
  const double u_end = cfg.tail_cut / decay;
  double lo = x / *std::max_element(lambda.begin(), lambda.end()) / 4;
  double hi = 4 * x / *std::min_element(lambda.begin(), lambda.end());
  std::vector<double> br{0.0};
  lo = std::min(lo, u_end / 64);
  double b = lo;
  while (b < u_end) {
    br.push_back(b);
    double next = b < hi ? 2 * b : 4 * b;
    next = std::min(next, b + 16 * gamma);
    b = next;
  }
  br.push_back(u_end);
  const GaussRule& gl = gauss_legendre(nodes);
  RadialRule rule;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], c = br[i + 1];
    if (c <= a) continue;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double u = 0.5 * (a + c) + 0.5 * (c - a) * gl.nodes[q];
      rule.u.push_back(u);
      rule.w.push_back(0.5 * (c - a) * gl.weights[q] * omega *
                       std::exp(-omega * u / (2 * gamma)) / (2 * gamma));
    }
  }
  return rule;
}

struct ZCoeffs {
  cplx z;
  cplx t1;
  std::vector<std::vector<cplx>> c2;  // [k][l]
  std::vector<cplx> a3;               // [u]
};

struct Tables {
  int p = 0, n = 0;
  std::vector<double> lambda, gamma;
  std::vector<std::vector<std::vector<double>>> g3;  // [u][k][l] Gamma_k^2 Gamma_l^2 E_u(Gamma^{kl})
  std::vector<std::vector<std::vector<double>>> l3;  // [u][m][n]
};

ZCoeffs z_coeffs(const Tables& t, const SymTable& tl, const SymTable& tg, cplx z) {
  const int p = t.p, n = t.n;
  ZCoeffs c;
  c.z = z;
  c.t1 = 0.0;
  for (int u = 0; u < p; ++u)
    c.t1 += std::pow(z, p - u - 1) * (u % 2 ? -1.0 : 1.0) * factorial(u) * esym(tl.e_full, u) *
            esym(tg.e_full, u) * double(p - u);
  c.c2.assign(n, std::vector<cplx>(p, 0.0));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < p; ++l) {
      cplx s = 0.0;
      for (int u = 0; u <= p - 2; ++u)
        s += std::pow(z, p - u - 2) * (u % 2 ? -1.0 : 1.0) * factorial(u) *
             esym(tl.e_excl[l], u) * esym(tg.e_excl[k], u) * double(p - u - 1);
      c.c2[k][l] = t.gamma[k] * t.gamma[k] * t.lambda[l] * t.lambda[l] * s;
    }
  for (int u = 0; u <= p - 3; ++u)
    c.a3.push_back(std::pow(z, p - u - 3) * (u % 2 ? -1.0 : 1.0) * factorial(u) *
                   double(p - u - 2));
  return c;
}

constexpr int kZ = 3;

struct Accumulator {
  cplx sum[kZ] = {0.0, 0.0, 0.0};
};

// Sums the integrand over all radial tuples for one angle tuple.
void radial_sweep(const Tables& t, const std::vector<RadialRule>& rules, cplx omega,
                  const std::vector<std::vector<double>>& cosd, const ZCoeffs* zc, RealTerms terms,
                  double weight_floor, Accumulator& acc) {
  const int n = t.n, p = t.p;
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> u(n), q(n);
  std::vector<cplx> c(n), inv_det(p), mfac1(p), mfac2(p);
  std::vector<double> size(n);
  for (int k = 0; k < n; ++k) size[k] = rules[k].u.size();
  double wmax = 1.0;
  for (int k = 0; k < n; ++k) {
    double m = 0.0;
    for (const auto& w : rules[k].w) m = std::max(m, std::abs(w));
    wmax *= m;
  }
  while (true) {
    cplx w = 1.0;
    for (int k = 0; k < n; ++k) {
      u[k] = rules[k].u[idx[k]];
      w *= rules[k].w[idx[k]];
    }
    if (std::abs(w) > weight_floor * wmax) {
      double U = 0.0, zsq = 0.0;
      for (int k = 0; k < n; ++k) U += u[k];
      for (int k = 0; k < n; ++k) {
        double qk = 0.0;
        for (int j = 0; j < n; ++j) {
          zsq += u[j] * u[k] * cosd[j][k];
          qk += u[j] * (1.0 + cosd[j][k]) / 2;
        }
        q[k] = qk;
      }
      const double rz = std::sqrt(std::max(zsq, 0.0));
      const cplx y1 = omega * (U + rz) / 2.0, y2 = omega * (U - rz) / 2.0;
      const cplx T = omega * U;
      const cplx tr_y2 = omega * omega * (U * U + zsq) / 2.0;
      for (int zi = 0; zi < kZ; ++zi) {
        const cplx z = zc[zi].z;
        cplx G = 1.0;
        for (int j = 0; j < p; ++j) {
          const cplx f1 = z - t.lambda[j] * y1, f2 = z - t.lambda[j] * y2;
          G /= std::sqrt(f1) * std::sqrt(f2);
          inv_det[j] = 1.0 / (f1 * f2);
        }
        cplx ins = 0.0;
        if (terms.t1) ins += zc[zi].t1;
        if (terms.t2 && p >= 2) {
          for (int k = 0; k < n; ++k) {
            const cplx ck = omega * u[k] / t.gamma[k];
            const cplx qk = omega * q[k];
            for (int l = 0; l < p; ++l)
              ins -= zc[zi].c2[k][l] * ck * (z - t.lambda[l] * (T - qk)) * inv_det[l];
          }
        }
        if (terms.t3 && p >= 3 && n >= 2) {
          for (std::size_t uu = 0; uu < zc[zi].a3.size(); ++uu) {
            cplx gs = 0.0, ls = 0.0;
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l) {
                if (k == l) continue;
                const double wedge =
                    u[k] * u[l] / (t.gamma[k] * t.gamma[l]) * (1.0 - cosd[k][l]) / 2;
                gs += t.g3[uu][k][l] * 0.5 * wedge;
              }
            gs *= omega * omega;
            for (int m = 0; m < p; ++m)
              for (int nn = 0; nn < p; ++nn) {
                if (m == nn) continue;
                const double lm = t.lambda[m], ln = t.lambda[nn];
                const cplx trm = 2.0 * z - lm * T, trn = 2.0 * z - ln * T;
                const cplx trmn = 2.0 * z * z - z * (lm + ln) * T + lm * ln * tr_y2;
                ls += t.l3[uu][m][nn] * (trm * trn - trmn) / 2.0 * inv_det[m] * inv_det[nn];
              }
            ins += zc[zi].a3[uu] * gs * ls;
          }
        }
        acc.sum[zi] += w * G * ins;
      }
    }
    int k = 0;
    while (k < n && ++idx[k] == size[k]) idx[k++] = 0;
    if (k == n) break;
  }
}

struct LevelResult {
  double im[kZ];
  double evaluations;
};

LevelResult run_level(const Tables& t, const std::vector<ZCoeffs>& zc, double x, cplx omega,
                      const RealQuadConfig& cfg, RealTerms terms, int nodes, int angle_nodes) {
  const int n = t.n;
  std::vector<RadialRule> rules;
  double radial = 1.0;
  for (int k = 0; k < n; ++k) {
    rules.push_back(radial_rule(t.gamma[k], x, t.lambda, omega, cfg, nodes));
    radial *= rules.back().u.size();
  }
  // Nodes cluster at zero relative angle, where the smaller eigenvalue of Y vanishes.
  const double lmax = *std::max_element(t.lambda.begin(), t.lambda.end());
  const double gmax = *std::max_element(t.gamma.begin(), t.gamma.end());
  const double kappa = std::clamp(2.0 * std::sqrt(x / (2.0 * lmax * gmax)), 0.05, 1.0);
  std::vector<double> psi_node, psi_weight;
  const int half = n == 2 ? angle_nodes / 2 : angle_nodes - 1;
  for (int j = 0; j <= half; ++j) {
    const double tt = 2 * kPi * j / angle_nodes;
    const double c = std::cos(tt / 2), s = std::sin(tt / 2);
    psi_node.push_back(2 * std::atan2(kappa * s, c));
    double w = kappa / (c * c + kappa * kappa * s * s) / angle_nodes;
    if (n == 2 && j != 0 && 2 * j != angle_nodes) w *= 2;
    psi_weight.push_back(w);
  }
  const std::size_t per_axis = psi_node.size();
  const std::size_t angle_tuples =
      static_cast<std::size_t>(std::llround(std::pow(double(per_axis), n - 1)));
  LevelResult out{{0, 0, 0}, radial * double(angle_tuples)};
  if (out.evaluations > cfg.max_evaluations)
    throw Error(ErrorCode::CostGuard, "real-case quadrature exceeds the evaluation budget");
  std::vector<Accumulator> parts(angle_tuples);
  parallel_for(angle_tuples, [&](std::size_t a) {
    std::vector<double> psi(n, 0.0);
    double weight = 1.0;
    std::size_t rem = a;
    for (int k = 1; k < n; ++k) {
      psi[k] = psi_node[rem % per_axis];
      weight *= psi_weight[rem % per_axis];
      rem /= per_axis;
    }
    std::vector<std::vector<double>> cosd(n, std::vector<double>(n));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) cosd[j][k] = std::cos(psi[j] - psi[k]);
    radial_sweep(t, rules, omega, cosd, zc.data(), terms, 1e-18, parts[a]);
    for (auto& v : parts[a].sum) v *= weight;
  });
  for (int zi = 0; zi < kZ; ++zi) {
    cplx s = 0.0;
    for (const auto& part : parts) s += part.sum[zi];
    out.im[zi] = s.imag() / (t.p * kPi);
  }
  return out;
}

// Value at eps = 0 from the quadratic through the three points, and its distance
// from the least-squares line as the extrapolation error.
std::pair<double, double> extrapolate(const double* e, const double* v) {
  double quad = 0.0;
  for (int i = 0; i < kZ; ++i) {
    double l = 1.0;
    for (int j = 0; j < kZ; ++j)
      if (j != i) l *= e[j] / (e[j] - e[i]);
    quad += l * v[i];
  }
  double se = 0, sv = 0, see = 0, sev = 0;
  for (int i = 0; i < kZ; ++i) {
    se += e[i];
    sv += v[i];
    see += e[i] * e[i];
    sev += e[i] * v[i];
  }
  const double slope = (kZ * sev - se * sv) / (kZ * see - se * se);
  const double line = (sv - slope * se) / kZ;
  return {quad, std::abs(quad - line)};
}

}  // namespace

RealQuadResult density_quad_r1(const EnsembleSpec& spec, double x, const RealQuadConfig& cfg,
                               RealTerms terms) {
  require_real(spec);
  validate_quad_config(cfg);
  if (spec.p > 4 || spec.n > 4)
    throw Error(ErrorCode::CostGuard, "real-case quadrature supports p, n <= 4");
  if (!(x > 0.0)) throw Error(ErrorCode::BadConfig, "density needs x > 0");
  Tables t;
  t.p = spec.p;
  t.n = spec.n;
  t.lambda = spec.lambda;
  t.gamma = spec.gamma;
  const SymTable tl = make_sym_table(spec.lambda, true);
  const SymTable tg = make_sym_table(spec.gamma, true);
  for (int u = 0; u <= t.p - 3; ++u) {
    t.g3.emplace_back(t.n, std::vector<double>(t.n, 0.0));
    t.l3.emplace_back(t.p, std::vector<double>(t.p, 0.0));
    for (int k = 0; k < t.n; ++k)
      for (int l = 0; l < t.n; ++l)
        if (k != l)
          t.g3[u][k][l] = std::pow(t.gamma[k] * t.gamma[l], 2) * esym(tg.e_excl2[k][l], u);
    for (int m = 0; m < t.p; ++m)
      for (int l = 0; l < t.p; ++l)
        if (m != l)
          t.l3[u][m][l] = std::pow(t.lambda[m] * t.lambda[l], 2) * esym(tl.e_excl2[m][l], u);
  }
  double eps[kZ];
  std::vector<ZCoeffs> zc;
  for (int zi = 0; zi < kZ; ++zi) {
    eps[zi] = cfg.eps * x / double(1 << zi);
    zc.push_back(z_coeffs(t, tl, tg, cplx(x, -eps[zi])));
  }
  const cplx omega = std::polar(1.0, cfg.damping);
  const LevelResult coarse = run_level(t, zc, x, omega, cfg, terms, cfg.nodes, cfg.angle_nodes);
  const LevelResult fine = run_level(t, zc, x, omega, cfg, terms, cfg.nodes + cfg.nodes / 2,
                                     cfg.angle_nodes + cfg.angle_nodes / 2);
  const double vc = extrapolate(eps, coarse.im).first;
  const auto [vf, rf] = extrapolate(eps, fine.im);
  RealQuadResult out;
  out.value = vf;
  out.node_difference = std::abs(vf - vc);
  out.extrapolation_residual = rf;
  out.evaluations = coarse.evaluations + fine.evaluations;
  out.error = out.node_difference + rf + 1e-14 * std::abs(vf);
  if (out.error > cfg.tolerance * std::abs(vf) + cfg.abs_tolerance)
    throw Error(ErrorCode::NotConverged, "real-case quadrature did not converge");
  return out;
}

}  // namespace wishart
