#include <algorithm>
#include <cmath>
#include <numbers>

#include "wishart/quadrature.hpp"
#include "wishart/real_density.hpp"
#include "wishart/specfun.hpp"
#include "wishart/symfunc.hpp"

namespace wishart {

namespace {

constexpr double kPi = std::numbers::pi;

void check_distinct(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw Error(ErrorCode::NonPositiveEigenvalue, what);
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(v[i] - v[j]) <= 1e-8 * std::max(v[i], v[j]))
        throw Error(ErrorCode::DegenerateEigenvalues, what);
  }
}

// Radial kernel A_k K_k(R, r) of the Gamma-pair k; real.
class PairKernel {
 public:
  PairKernel(const std::vector<double>& gamma, int k) : gamma_(gamma), k_(k) {
    const int m = static_cast<int>(gamma.size());
    double q = 1.0;
    for (double g : gamma) q *= -g * g / 4;
    if (m == 1) {
      scale_ = -16 * kPi / q;
      return;
    }
    double dprod = 1.0;
    for (int j = 0; j < m; ++j)
      if (j != k) dprod *= delta(k, j);
    scale_ = -2 * kPi * (m % 2 ? -1.0 : 1.0) / (std::pow(-4.0, m - 1) * q * dprod);
    for (int j = 0; j < m; ++j) {
      if (j == k) continue;
      double c = 1.0;
      for (int i = 0; i < m; ++i)
        if (i != j && i != k) c *= delta(k, j) - delta(k, i);
      coeff_.push_back({j, 1.0 / c});
    }
  }

  QuadResult operator()(double R, double r) const {
    if (gamma_.size() == 1) return {scale_ / std::sqrt(R * R - r * r), 0.0, 1, true};
    auto inner = [&](double theta) {
      const double b = R / 4 - r / 4 * std::cos(theta);
      double s = 0.0;
      for (const auto& [j, c] : coeff_) s += c * -2.0 * h_kernel(delta(k_, j), b).value;
      return s;
    };
    QuadResult q = integrate(inner, 0.0, kPi, 1e-13, 1e-11, 400);
    q.value *= scale_ / kPi;
    q.error *= std::abs(scale_) / kPi;
    return q;
  }

 private:
  double delta(int k, int j) const { return 1.0 / gamma_[k] - 1.0 / gamma_[j]; }
  std::vector<double> gamma_;
  int k_;
  double scale_ = 0.0;
  std::vector<std::pair<int, double>> coeff_;
};

}  // namespace

EnsembleSpec expand_pairs(const DegeneratePairSpec& pairs) {
  EnsembleSpec spec;
  spec.beta = 1;
  for (double l : pairs.lambda_pairs) spec.lambda.insert(spec.lambda.end(), {l, l});
  for (double g : pairs.gamma_pairs) spec.gamma.insert(spec.gamma.end(), {g, g});
  spec.p = static_cast<int>(spec.lambda.size());
  spec.n = static_cast<int>(spec.gamma.size());
  return spec;
}

RealQuadResult reduced_s11_degenerate(const DegeneratePairSpec& pairs, double x,
                                      const RealQuadConfig& cfg) {
  validate_quad_config(cfg);
  if (pairs.lambda_pairs.empty() || pairs.gamma_pairs.empty())
    throw Error(ErrorCode::DimensionMismatch, "pair lists must be non-empty");
  check_distinct(pairs.lambda_pairs, "Lambda pair values must be distinct and positive");
  check_distinct(pairs.gamma_pairs, "Gamma pair values must be distinct and positive");
  if (!(x > 0.0)) throw Error(ErrorCode::BadConfig, "density needs x > 0");
  const EnsembleSpec full = expand_pairs(pairs);
  const int p = full.p;
  const auto el = elementary_symmetric_all(full.lambda);
  const auto eg = elementary_symmetric_all(full.gamma);
  double g = 0.0;
  for (int u = 0; u < p; ++u) {
    const double e = u < static_cast<int>(eg.size()) ? eg[u] : 0.0;
    g += std::pow(x, p - u - 1) * (u % 2 ? -1.0 : 1.0) * el[u] * std::tgamma(u + 1.0) * e * (p - u);
  }
  const double C = 1.0 / (512.0 * p * kPi * kPi);
  const auto& lam = pairs.lambda_pairs;
  const auto& gam = pairs.gamma_pairs;
  const int pl = static_cast<int>(lam.size()), ng = static_cast<int>(gam.size());

  RealQuadResult out;
  bool converged = true;
  for (int k = 0; k < ng; ++k) {
    const PairKernel kernel(gam, k);
    for (int l = 0; l < pl; ++l) {
      const double a = x / lam[l];
      double lam_const = 4 * kPi / (lam[l] * lam[l]);
      for (int j = 0; j < pl; ++j)
        if (j != l) lam_const /= lam[j] * lam[j] * (x / lam[j] - a);
      // R = a + t^2
      auto F = [&](double t) {
        const double R = a + t * t;
        const double r = R - 2 * a;
        double prod = 1.0;
        for (int j = 0; j < pl; ++j)
          if (j != l) prod /= x / lam[j] + a - R;
        const QuadResult K = kernel(R, r);
        converged = converged && K.converged;
        const double sgn = r > 0 ? -1.0 : 1.0;
        double v = 2 * t * C * g * std::exp(-R / (2 * gam[k])) * K.value * lam_const * sgn * prod;
        return v;
      };
      auto Fsafe = [&](double t) {
        double v = F(t);
        if (!std::isfinite(v)) v = F(t * (1 + 1e-9) + 1e-300);
        if (!std::isfinite(v))
          throw Error(ErrorCode::SingularityOnNode, "reduced integrand singular on a node");
        return v;
      };
      std::vector<double> special{std::sqrt(a)};
      std::vector<double> poles;
      for (int j = 0; j < pl; ++j)
        if (j != l) poles.push_back(std::sqrt(x / lam[j]));
      std::vector<double> all = special;
      all.insert(all.end(), poles.begin(), poles.end());
      std::sort(all.begin(), all.end());
      // Half-widths of the symmetric windows around the poles.
      std::vector<std::pair<double, double>> windows;
      for (double t0 : poles) {
        double h = t0;
        for (double s : all)
          if (s != t0) h = std::min(h, std::abs(s - t0));
        windows.push_back({t0, 0.5 * h});
      }
      std::vector<double> cuts{0.0};
      for (double s : special) cuts.push_back(s);
      for (const auto& [t0, h] : windows) {
        cuts.push_back(t0 - h);
        cuts.push_back(t0 + h);
      }
      std::sort(cuts.begin(), cuts.end());
      const double tol_abs = 1e-12, tol_rel = 1e-10;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi <= lo) continue;
        bool is_window = false;
        for (const auto& [t0, h] : windows)
          if (std::abs(lo - (t0 - h)) < 1e-15 * t0 && std::abs(hi - (t0 + h)) < 1e-15 * t0) {
            auto sym = [&, t0](double tau) { return Fsafe(t0 + tau) + Fsafe(t0 - tau); };
            const QuadResult q = integrate(sym, 0.0, h, tol_abs, tol_rel, 4000);
            out.value += q.value;
            out.error += q.error;
            converged = converged && q.converged;
            is_window = true;
          }
        if (is_window) continue;
        const QuadResult q = integrate(Fsafe, lo, hi, tol_abs, tol_rel, 4000);
        out.value += q.value;
        out.error += q.error;
        converged = converged && q.converged;
      }
      const QuadResult tail = integrate_to_inf(Fsafe, cuts.back(), tol_abs, tol_rel, 4000);
      out.value += tail.value;
      out.error += tail.error;
      converged = converged && tail.converged;
    }
  }
  out.error += 1e-14 * std::abs(out.value);
  if (!converged || out.error > cfg.tolerance * std::abs(out.value) + cfg.abs_tolerance)
    throw Error(ErrorCode::NotConverged, "reduced quadrature did not converge");
  return out;
}

}  // namespace wishart
