#pragma once

#include <cmath>
#include <limits>

namespace wishart {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, roughly 32 significant digits.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = dd_detail::two_sum(a.hi, b.hi);
  DoubleDouble t = dd_detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd_detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = dd_detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  const double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * DoubleDouble(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * DoubleDouble(q2);
  const double q3 = r.hi / b.hi;
  DoubleDouble q = dd_detail::quick_two_sum(q1, q2);
  return q + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, DoubleDouble b) { return a = a * b; }
inline DoubleDouble& operator/=(DoubleDouble& a, DoubleDouble b) { return a = a / b; }

inline bool operator<(DoubleDouble a, DoubleDouble b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(DoubleDouble a, DoubleDouble b) { return b < a; }
inline bool operator<=(DoubleDouble a, DoubleDouble b) { return !(b < a); }
inline bool operator>=(DoubleDouble a, DoubleDouble b) { return !(a < b); }
inline bool operator==(DoubleDouble a, DoubleDouble b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(DoubleDouble a, DoubleDouble b) { return !(a == b); }

inline DoubleDouble abs(DoubleDouble a) { return a.hi < 0.0 ? -a : a; }

inline DoubleDouble ldexp(DoubleDouble a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

inline DoubleDouble sqrt(DoubleDouble a) {
  if (a.hi <= 0.0) return DoubleDouble(0.0);
  const double s = std::sqrt(a.hi);
  DoubleDouble ss = dd_detail::two_prod(s, s);
  const double corr = ((a - ss).hi) / (2.0 * s);
  return dd_detail::quick_two_sum(s, corr);
}

inline DoubleDouble exp(DoubleDouble a) {
  if (a.hi > 709.0) return DoubleDouble(std::numeric_limits<double>::infinity());
  if (a.hi < -745.0) return DoubleDouble(0.0);
  constexpr DoubleDouble ln2{6.931471805599452862e-01, 2.319046813846299558e-17};
  const double k = std::nearbyint(a.hi / ln2.hi);
  DoubleDouble r = a - ln2 * DoubleDouble(k);
  r = ldexp(r, -10);
  // Taylor series on |r| < 2^-10 * ln2/2.
  DoubleDouble term = r, sum = r;
  for (int i = 2; i < 14; ++i) {
    term = term * r / DoubleDouble(double(i));
    sum += term;
    if (std::abs(term.hi) < 1e-34) break;
  }
  // expm1 squaring: (1+s)^2 - 1 = s(2+s).
  for (int i = 0; i < 10; ++i) sum = sum * (DoubleDouble(2.0) + sum);
  sum += DoubleDouble(1.0);
  return ldexp(sum, static_cast<int>(k));
}

inline DoubleDouble log(DoubleDouble a) {
  if (a.hi <= 0.0) return DoubleDouble(std::numeric_limits<double>::quiet_NaN());
  DoubleDouble x = std::log(a.hi);
  // Two Newton steps on exp(x) = a.
  for (int i = 0; i < 2; ++i) x = x + a * exp(-x) - DoubleDouble(1.0);
  return x;
}

inline double to_double(double a) { return a; }
inline double to_double(DoubleDouble a) { return a.hi + a.lo; }

}  // namespace wishart
