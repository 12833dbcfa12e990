#include "wishart/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "wishart/errors.hpp"

namespace wishart {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double j_series(double x, int nu) {
  const double q = -0.25 * x * x;
  double term = nu == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (double(k) * double(k + nu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > 2) break;
  }
  return sum;
}

// Miller backward recurrence normalised by J0 + 2 sum J_2k = 1.
void j_miller(double x, double& j0, double& j1) {
  int start = static_cast<int>(x) + 40;
  if (start % 2) ++start;
  double jp1 = 0.0, jk = 1e-300, norm = 0.0;
  double r0 = 0.0, r1 = 0.0;
  for (int k = start; k >= 1; --k) {
    const double jm1 = (2.0 * k / x) * jk - jp1;
    jp1 = jk;
    jk = jm1;
    if (std::abs(jk) > 1e250) {
      jk *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
    }
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * jk;
    if (k - 1 == 1) r1 = jk;
  }
  r0 = jk;
  norm += r0;
  j0 = r0 / norm;
  j1 = r1 / norm;
}

void j_hankel(double x, int nu, double& out) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double ak = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double f = (mu - double(2 * k - 1) * double(2 * k - 1)) / (double(k) * 8.0 * x);
    ak *= f;
    if (std::abs(ak) > prev) break;
    prev = std::abs(ak);
    const int m = k % 4;
    if (m == 1) q += ak;
    else if (m == 2) p -= ak;
    else if (m == 3) q -= ak;
    else p += ak;
    if (prev < 1e-17) break;
  }
  const double chi_arg = x - (0.5 * nu + 0.25) * std::numbers::pi;
  out = std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi_arg) - q * std::sin(chi_arg));
}

double e1_series(double x) {
  double sum = 0.0, term = 1.0;
  for (int k = 1; k < 300; ++k) {
    term *= -x / k;
    sum += term / k;
    if (std::abs(term / k) < kEps * std::abs(sum) * 0.1) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

// Modified Lentz on E1(x) = e^-x / (x + 1/(1 + 1/(x + 2/(1 + ...)))), returns e^x E1(x).
double e1_cf_scaled(double x) {
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -double(i) * double(i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double ei_series(double x) {
  double sum = 0.0, term = 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= x / k;
    sum += term / k;
    if (term / k < kEps * sum * 0.1) break;
  }
  return kEulerGamma + std::log(x) + sum;
}

// e^-x Ei(x) by the asymptotic series, x large.
double ei_asym_scaled(double x) {
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double next = term * k / x;
    if (next > term) break;
    term = next;
    sum += term;
    if (term < kEps * 0.1) break;
  }
  return sum / x;
}

}  // namespace

double bessel_j0(double x) {
  const double ax = std::abs(x);
  if (ax < 8.0) return j_series(ax, 0);
  if (ax < 25.0) {
    double j0, j1;
    j_miller(ax, j0, j1);
    return j0;
  }
  double v;
  j_hankel(ax, 0, v);
  return v;
}

double bessel_j1(double x) {
  const double ax = std::abs(x);
  double v;
  if (ax < 8.0) {
    v = j_series(ax, 1);
  } else if (ax < 25.0) {
    double j0;
    j_miller(ax, j0, v);
  } else {
    j_hankel(ax, 1, v);
  }
  return x < 0 ? -v : v;
}

double expint_e1(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::ZeroArgument, "E1 needs x > 0");
  if (x <= 1.0) return e1_series(x);
  return std::exp(-x) * e1_cf_scaled(x);
}

double expint_e1_scaled(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::ZeroArgument, "E1 needs x > 0");
  if (x <= 1.0) return std::exp(x) * e1_series(x);
  return e1_cf_scaled(x);
}

double expint_ei(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::ZeroArgument, "Ei needs x > 0");
  if (x <= 40.0) return ei_series(x);
  return std::exp(x) * ei_asym_scaled(x);
}

double expint_ei_scaled(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::ZeroArgument, "Ei needs x > 0");
  if (x <= 40.0) return std::exp(-x) * ei_series(x);
  return ei_asym_scaled(x);
}

double chi(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::ZeroArgument, "Chi needs x > 0");
  if (x > 40.0) return 0.5 * (expint_ei(x) - expint_e1(x));
  const double x2 = x * x;
  double term = 1.0, sum = 0.0;
  for (int k = 1; k < 500; k += 1) {
    term *= x2 / (double(2 * k - 1) * double(2 * k));
    const double t = term / (2 * k);
    sum += t;
    if (t < kEps * sum * 0.1) break;
  }
  return kEulerGamma + std::log(x) + sum;
}

double shi(double x) {
  const double ax = std::abs(x);
  double v;
  if (ax > 40.0) {
    v = 0.5 * (expint_ei(ax) + expint_e1(ax));
  } else {
    const double x2 = ax * ax;
    double term = ax;
    v = ax;
    for (int k = 1; k < 500; ++k) {
      term *= x2 / (double(2 * k) * double(2 * k + 1));
      const double t = term / (2 * k + 1);
      v += t;
      if (t < kEps * v * 0.1) break;
    }
  }
  return x < 0 ? -v : v;
}

double cosi_imag_re(double y) { return chi(std::abs(y)); }

double sinhi(double x) { return shi(x); }

SpecFunResult h_kernel(double a, double b, double floor) {
  const double y = a * b;
  if (!(std::abs(y) >= floor))
    throw Error(ErrorCode::ZeroArgument, "h kernel diverges at ab = 0");
  SpecFunResult r;
  if (y > 0.0)
    r.value = -expint_e1_scaled(y);
  else
    r.value = expint_ei_scaled(-y);
  r.est_error = 8.0 * kEps * (std::abs(r.value) + 1.0 / std::abs(y));
  return r;
}

double h_kernel_cosi(double a, double b) {
  const double y = a * b;
  return (cosi_imag_re(y) - sinhi(y)) * std::exp(y);
}

}  // namespace wishart
