#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "wishart/complex_density.hpp"
#include "wishart/quadrature.hpp"

using namespace wishart;

namespace {

const EnsembleSpec kFig1{2, 5, 2, {5.9, 1.1}, {0.3, 2.7, 2.5, 2.8, 5.6}};
const EnsembleSpec kFig2{5, 6, 2, {5.9, 1.1, 4.2, 2, 50}, {0.3, 2.7, 2.5, 2.8, 5.6, 1}};

template <class F>
double moment(F&& f, const EnsembleSpec& s, int k) {
  const double top = 4 * default_x_max(s);
  std::vector<double> pts;
  for (double x = 0.0; x < top; x += top / 64) pts.push_back(x);
  pts.push_back(top);
  const QuadResult body = integrate([&](double x) { return std::pow(x, k) * f(x); }, pts, 1e-13, 1e-11);
  const QuadResult tail = integrate_to_inf([&](double x) { return std::pow(x, k) * f(x); }, top, 1e-15, 1e-10);
  return body.value + tail.value;
}

double first_moment(const EnsembleSpec& s) {
  double sl = 0.0, sg = 0.0;
  for (double v : s.lambda) sl += v;
  for (double v : s.gamma) sg += v;
  return sl * sg / s.p;
}

// p = 1: x is Lambda times a sum of independent exponentials with means Gamma_k.
double hypoexponential(double lam, const std::vector<double>& g, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double m = lam * g[k];
    double c = 1.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (j != k) c *= g[k] / (g[k] - g[j]);
    s += c * std::exp(-x / m) / m;
  }
  return s;
}

}  // namespace

TEST_CASE("scalar case is the exponential law") {
  const auto plan = make_complex_plan({1, 1, 2, {1.0}, {1.0}});
  for (double x : {0.1, 1.0, 5.0}) CHECK(std::abs(density_exact_c2(plan, x) - std::exp(-x)) < 1e-10);
}

TEST_CASE("p = 1 reproduces the hypoexponential law") {
  const EnsembleSpec s{1, 4, 2, {1.7}, {0.5, 1.0, 2.5, 4.0}};
  const auto plan = make_complex_plan(s);
  for (double x : {0.05, 0.7, 3.0, 12.0, 40.0})
    CHECK(density_exact_c2(plan, x) == doctest::Approx(hypoexponential(1.7, s.gamma, x)).epsilon(1e-10));
}

TEST_CASE("normalization and first moment") {
  for (const EnsembleSpec& s : {kFig1, kFig2, EnsembleSpec{3, 3, 2, {0.5, 1.5, 3}, {1, 2, 4}}}) {
    const auto plan = make_complex_plan(s);
    auto f = [&](double x) { return density_exact_c2(plan, x); };
    CHECK(moment(f, s, 0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(moment(f, s, 1) == doctest::Approx(first_moment(s)).epsilon(1e-6));
  }
}

TEST_CASE("density is non-negative and finite on a wide grid") {
  const auto plan = make_complex_plan(kFig2);
  for (double x : default_grid(kFig2, 300)) {
    const DensityValue v = density_exact_c2_detail(plan, x);
    CHECK(std::isfinite(v.value));
    CHECK(v.value >= -v.error);
  }
}

TEST_CASE("permutation invariance") {
  std::mt19937_64 rng(5);
  EnsembleSpec s = kFig2;
  const auto base = make_complex_plan(s);
  for (int t = 0; t < 4; ++t) {
    std::shuffle(s.lambda.begin(), s.lambda.end(), rng);
    std::shuffle(s.gamma.begin(), s.gamma.end(), rng);
    const auto plan = make_complex_plan(s);
    for (double x : {1.0, 30.0, 150.0})
      CHECK(density_exact_c2(plan, x) == doctest::Approx(density_exact_c2(base, x)).epsilon(1e-10));
  }
}

TEST_CASE("scale covariance") {
  const auto base = make_complex_plan(kFig1);
  for (double c : {0.25, 3.0, 1000.0}) {
    EnsembleSpec s = kFig1;
    for (double& v : s.lambda) v *= c;
    const auto plan = make_complex_plan(s);
    EnsembleSpec t = kFig1;
    for (double& v : t.gamma) v *= c;
    const auto plan_g = make_complex_plan(t);
    for (double x : {2.0, 20.0, 90.0}) {
      const double ref = density_exact_c2(base, x) / c;
      CHECK(density_exact_c2(plan, c * x) == doctest::Approx(ref).epsilon(1e-11));
      CHECK(density_exact_c2(plan_g, c * x) == doctest::Approx(ref).epsilon(1e-11));
    }
  }
}

TEST_CASE("square case is symmetric under swapping Lambda and Gamma") {
  const EnsembleSpec a{3, 3, 2, {0.5, 1.5, 3}, {1, 2, 4}};
  const EnsembleSpec b{3, 3, 2, {1, 2, 4}, {0.5, 1.5, 3}};
  const auto pa = make_complex_plan(a), pb = make_complex_plan(b);
  for (double x : {0.3, 3.0, 30.0})
    CHECK(density_exact_c2(pa, x) == doctest::Approx(density_exact_c2(pb, x)).epsilon(1e-10));
}

TEST_CASE("degenerate eigenvalues: confluent, eps-split and near-distinct agree") {
  const EnsembleSpec deg{2, 4, 2, {1.0, 2.0}, {1.0, 1.0, 3.0, 3.0}};
  const ConfluentDensity conf(deg);
  EnsembleSpec near = deg;
  near.gamma = {1.0, 1.0 + 1e-4, 3.0, 3.0 + 1e-4};
  const auto pn = make_complex_plan(near);
  for (double x : {0.5, 4.0, 15.0}) {
    const double c = conf(x).value;
    CHECK(density_degenerate_c2(deg, x).value == doctest::Approx(c).epsilon(1e-6));
    CHECK(density_exact_c2(pn, x) == doctest::Approx(c).epsilon(1e-3));
  }
  CHECK_THROWS_AS(make_complex_plan(deg), Error);
}

TEST_CASE("identity Gamma matches the Gamma law for p = 1") {
  const EnsembleSpec s{1, 4, 2, {2.0}, {1, 1, 1, 1}};
  const ConfluentDensity conf(s);
  for (double x : {0.2, 3.0, 10.0, 30.0})
    CHECK(conf(x).value == doctest::Approx(std::pow(x, 3) * std::exp(-x / 2) / (16 * 6)).epsilon(1e-12));
}

TEST_CASE("confluent evaluator on distinct input matches the closed form") {
  const ConfluentDensity conf(kFig1);
  const auto plan = make_complex_plan(kFig1);
  for (double x : {1.0, 40.0, 200.0})
    CHECK(conf(x).value == doctest::Approx(density_exact_c2(plan, x)).epsilon(1e-10));
}

TEST_CASE("unsupported inputs") {
  CHECK_THROWS_AS(make_complex_plan({3, 2, 2, {1, 2, 3}, {1, 2}}), Error);
  CHECK_THROWS_AS(make_complex_plan({1, 1, 1, {1}, {1}}), Error);
}
