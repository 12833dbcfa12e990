#include <doctest.h>

#include <cmath>
#include <complex>

#include "wishart/asymptotics.hpp"
#include "wishart/complex_density.hpp"
#include "wishart/quadrature.hpp"

using namespace wishart;

TEST_CASE("effective mean is the arithmetic mean") {
  CHECK(effective_mean({1.0, 2.0, 6.0}) == doctest::Approx(3.0));
}

TEST_CASE("Marchenko-Pastur support, normalization and mean") {
  const int p = 100, n = 400;
  const auto [lo, hi] = marchenko_pastur_support(p, n, 1.0, 1.0);
  CHECK(std::abs(lo - 100.0) < 1e-9);
  CHECK(std::abs(hi - 900.0) < 1e-9);
  CHECK(marchenko_pastur(lo - 1e-6, p, n, 1.0, 1.0) == 0.0);
  CHECK(marchenko_pastur(hi + 1e-6, p, n, 1.0, 1.0) == 0.0);
  auto f = [&](double x) { return marchenko_pastur(x, p, n, 1.0, 1.0); };
  CHECK(std::abs(integrate(f, lo, hi, 1e-13, 1e-12).value - 1.0) < 1e-6);
  auto xf = [&](double x) { return x * f(x); };
  CHECK(integrate(xf, lo, hi, 1e-11, 1e-12).value == doctest::Approx(double(n)).epsilon(1e-6));

  const auto [lo2, hi2] = marchenko_pastur_support(30, 50, 2.0, 0.5);
  auto g = [&](double x) { return marchenko_pastur(x, 30, 50, 2.0, 0.5); };
  CHECK(std::abs(integrate(g, lo2, hi2, 1e-13, 1e-12).value - 1.0) < 1e-6);
  CHECK_THROWS_AS(marchenko_pastur(1.0, 5, 4, 1.0, 1.0), Error);
}

TEST_CASE("large-n form is exact for constant Gamma") {
  const EnsembleSpec s{2, 6, 2, {0.7, 2.2}, {1.3, 1.3, 1.3, 1.3, 1.3, 1.3}};
  const ConfluentDensity exact(s);
  for (double x : {0.5, 5.0, 20.0})
    CHECK(density_large_n(s.lambda, 1.3, 6, x) == doctest::Approx(exact(x).value).epsilon(1e-10));
}

TEST_CASE("large-n form keeps the first moment") {
  const std::vector<double> lambda{0.5, 1.0, 3.0};
  const double gbar = 1.7;
  const int n = 40;
  auto f = [&](double x) { return density_large_n(lambda, gbar, n, x); };
  const double top = 1.2 * 3.0 * gbar * std::pow(std::sqrt(3.0) + std::sqrt(double(n)), 2) * 2;
  const double m0 = integrate(f, 0.0, top, 1e-12, 1e-10).value;
  const double m1 = integrate([&](double x) { return x * f(x); }, 0.0, top, 1e-10, 1e-10).value;
  CHECK(m0 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(m1 == doctest::Approx(4.5 * n * gbar / 3).epsilon(1e-8));
}

TEST_CASE("stationary point") {
  const int p = 100, n = 400;
  const double lbar = 1.5, gbar = 0.8;
  const auto [lo, hi] = marchenko_pastur_support(p, n, lbar, gbar);
  for (double X : {lo + 0.1 * (hi - lo), 0.5 * (lo + hi), hi - 0.1 * (hi - lo)}) {
    const StationaryPoint sp = stationary_point({X, 0.0}, n, p, lbar, gbar);
    const std::complex<double> I(0.0, 1.0);
    CHECK(std::abs(double(n) / sp.sigma0 - I * sp.rho0) < 1e-9 * std::abs(sp.rho0));
    CHECK(sp.rho0.real() == doctest::Approx((n - p) * gbar / 2 + X / (2 * lbar)));
    // Inside the support the square root is real, so rho0 has a positive imaginary part
    // fixing |rho0|^2 = n gbar X / lbar.
    CHECK(sp.rho0.imag() > 0.0);
    CHECK(std::norm(sp.rho0) == doctest::Approx(n * gbar * X / lbar).epsilon(1e-10));
  }
}

TEST_CASE("large-n form refuses a result without significant digits") {
  const std::vector<double> lambda(100, 1.0);
  try {
    density_large_n(lambda, 1.0, 400, 500.0);
    FAIL("expected NotConverged");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotConverged);
  }
  const std::vector<double> small(32, 1.0);
  CHECK(density_large_n(small, 1.0, 64, 96.0) == doctest::Approx(4.6537e-3).epsilon(1e-4));
}
