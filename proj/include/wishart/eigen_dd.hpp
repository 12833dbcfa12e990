#pragma once

#include <Eigen/Core>
#include <cmath>
#include <utility>

#include "wishart/double_double.hpp"

namespace Eigen {

template <>
struct NumTraits<wishart::DoubleDouble> : GenericNumTraits<wishart::DoubleDouble> {
  typedef wishart::DoubleDouble Real;
  typedef wishart::DoubleDouble NonInteger;
  typedef wishart::DoubleDouble Nested;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 10,
    MulCost = 20
  };
  static inline Real epsilon() { return Real(4.93038065763132e-32); }
  static inline Real dummy_precision() { return Real(1e-28); }
  static inline Real highest() { return Real(1.79e308); }
  static inline Real lowest() { return Real(-1.79e308); }
  static inline int digits10() { return 31; }
};

}  // namespace Eigen

namespace wishart {

template <class T>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// value = mantissa * 2^exponent
template <class T>
struct ScaledDet {
  T mantissa = T(0.0);
  long exponent = 0;
};

// Determinant by LU with partial pivoting; columns are normalised by powers of two
// and the scale kept in the exponent.
template <class T>
ScaledDet<T> scaled_determinant(MatrixX<T> m) {
  using std::abs;
  const Eigen::Index n = m.rows();
  ScaledDet<T> out;
  out.mantissa = T(1.0);
  auto renorm = [&out]() {
    int e;
    std::frexp(to_double(out.mantissa), &e);
    out.mantissa = out.mantissa * T(std::ldexp(1.0, -e));
    out.exponent += e;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    T big = T(0.0);
    for (Eigen::Index i = 0; i < n; ++i) big = std::max(big, abs(m(i, j)));
    if (big == T(0.0)) return {T(0.0), 0};
    int e;
    std::frexp(to_double(big), &e);
    const T s = T(std::ldexp(1.0, -e));
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = m(i, j) * s;
    out.exponent += e;
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index i = c + 1; i < n; ++i)
      if (abs(m(i, c)) > abs(m(piv, c))) piv = i;
    if (m(piv, c) == T(0.0)) return {T(0.0), 0};
    if (piv != c) {
      for (Eigen::Index j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      out.mantissa = -out.mantissa;
    }
    const T d = m(c, c);
    out.mantissa = out.mantissa * d;
    renorm();
    for (Eigen::Index i = c + 1; i < n; ++i) {
      const T f = m(i, c) / d;
      if (f == T(0.0)) continue;
      for (Eigen::Index j = c + 1; j < n; ++j) m(i, j) = m(i, j) - f * m(c, j);
    }
  }
  return out;
}

}  // namespace wishart
