#include "wishart/character.hpp"

#include <cmath>
#include <limits>

#include "wishart/eigen_dd.hpp"
#include "wishart/symfunc.hpp"

namespace wishart {

namespace {

template <class T>
T g_kernel_t(T y, int alpha, T z, int n) {
  T sum = T(0.0), term = T(1.0);
  for (int m = 0; m < alpha; ++m) {
    if (m > 0) term = term * (-z * y) / T(double(m));
    sum += term;
  }
  T fact = T(1.0);
  for (int i = 2; i < alpha; ++i) fact *= T(double(i));
  T pw = T(1.0);
  const int e = n - alpha;
  for (int i = 0; i < std::abs(e); ++i) pw *= y;
  if (e < 0) pw = T(1.0) / pw;
  return pw * fact * sum;
}

template <class T>
T evaluate(const CharacterPlan& plan, double xd) {
  using std::exp;
  const int n = plan.n, p = plan.p;
  const T x = T(xd);
  std::vector<T> a(plan.a.begin(), plan.a.end()), b(plan.b.begin(), plan.b.end());
  T fact_n1 = T(1.0);
  for (int i = 2; i < n; ++i) fact_n1 *= T(double(i));

  MatrixX<T> base(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j < p) {
        base(i, j) = g_kernel_t(a[i] * b[j], n, x, n);
      } else {
        T pw = T(1.0);
        for (int e = 0; e < j; ++e) pw *= a[i];
        base(i, j) = pw;
      }
    }
  std::vector<std::vector<T>> ex(n, std::vector<T>(p));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) ex[i][j] = exp(-a[i] * b[j] * x);

  std::vector<ScaledDet<T>> dets;
  const T shift = T(double(p) * (p - 1) / 2.0) / x;
  for (int k = 0; k < n; ++k) {
    MatrixX<T> kt = base;
    for (int j = 0; j < n; ++j) kt(k, j) = j < p ? (a[k] * b[j] + shift) * ex[k][j] * fact_n1 : T(0.0);
    dets.push_back(scaled_determinant(kt));
    for (int m = 0; m < n; ++m) {
      if (m == k) continue;
      MatrixX<T> tm = base;
      for (int j = 0; j < n; ++j) {
        tm(k, j) = j < p ? ex[k][j] * fact_n1 : T(0.0);
        if (j < p) {
          T v = T(double(n - 1)) * g_kernel_t(a[m] * b[j], n - 1, x, n);
          if (!plan.corrected) v *= a[m] * b[j];
          tm(m, j) = v;
        } else {
          tm(m, j) = T(0.0);
        }
      }
      dets.push_back(scaled_determinant(tm));
    }
  }
  long emax = std::numeric_limits<long>::min();
  for (const auto& d : dets)
    if (d.mantissa != T(0.0)) emax = std::max(emax, d.exponent);
  if (emax == std::numeric_limits<long>::min()) return T(0.0);
  T sum = T(0.0);
  for (const auto& d : dets)
    if (d.mantissa != T(0.0)) sum += d.mantissa * T(std::ldexp(1.0, static_cast<int>(std::max(-1074L, d.exponent - emax))));
  // prefactor * x^(-p(p-1)/2) * 2^emax in the log domain
  const double log_scale = plan.prefactor.log_abs - 0.5 * p * (p - 1) * std::log(xd) +
                           double(emax) * std::log(2.0);
  if (log_scale > 700.0) throw Error(ErrorCode::Overflow, "character prefactor overflows");
  int sign = plan.prefactor.sign;
  if ((p * (p - 1) / 2) % 2) sign = -sign;
  return sum * T(sign * std::exp(log_scale));
}

}  // namespace

double g_kernel(double x, int alpha, double z, int n) {
  if (alpha < 1) throw Error(ErrorCode::BadConfig, "g kernel needs alpha >= 1");
  return g_kernel_t(x, alpha, z, n);
}

CharacterPlan make_character_plan(const EnsembleSpec& spec, bool corrected) {
  validate_spec(spec);
  if (spec.beta != 2) throw Error(ErrorCode::BadBeta, "character formula needs beta = 2");
  if (spec.n <= spec.p)
    throw Error(ErrorCode::UnsupportedRegime, "character formula needs n > p");
  CharacterPlan plan;
  plan.p = spec.p;
  plan.n = spec.n;
  plan.corrected = corrected;
  for (double g : spec.gamma) plan.a.push_back(1.0 / g);
  for (double l : spec.lambda) plan.b.push_back(1.0 / l);
  const SignedLog va = vandermonde(plan.a), vb = vandermonde(plan.b);
  if (va.sign == 0 || vb.sign == 0)
    throw Error(ErrorCode::SingularPrefactor, "character formula needs distinct eigenvalues");
  double lg = 0.0;
  for (int j = 1; j < spec.p; ++j) lg += std::lgamma(j + 1.0);
  lg -= std::log(double(spec.p)) + spec.p * std::lgamma(double(spec.n));
  plan.prefactor.log_abs = lg - va.log_abs - vb.log_abs;
  plan.prefactor.sign = va.sign * vb.sign;
  return plan;
}

double density_character(const CharacterPlan& plan, double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::BadConfig, "density needs x > 0");
  return evaluate<double>(plan, x);
}

double density_character_extended(const CharacterPlan& plan, double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::BadConfig, "density needs x > 0");
  return to_double(evaluate<DoubleDouble>(plan, x));
}

}  // namespace wishart
