#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wishart/double_double.hpp"
#include "wishart/spec.hpp"

namespace wishart {

// All E_0..E_len of the values not listed in `excluded`.
template <class T>
std::vector<T> elementary_symmetric_all(const std::vector<T>& values,
                                        const std::vector<int>& excluded = {}) {
  std::vector<T> e(values.size() + 1, T(0.0));
  e[0] = T(1.0);
  std::size_t len = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::find(excluded.begin(), excluded.end(), static_cast<int>(i)) != excluded.end())
      continue;
    ++len;
    for (std::size_t k = len; k >= 1; --k) e[k] += values[i] * e[k - 1];
  }
  return e;
}

double elementary_symmetric(const std::vector<double>& values, int k,
                            const std::vector<int>& excluded = {});

// prod_{j != l} (1/v_l - 1/v_j).
SignedLog delta_product(const std::vector<double>& values, int l, double gap = 1e-8);

// prod_{i<j} (v_j - v_i); log_abs = -inf when two entries coincide.
SignedLog vandermonde(const std::vector<double>& values);

// Tables of E_k for a list and its single and pair exclusions.
struct SymTable {
  std::vector<double> base;
  std::vector<double> e_full;
  std::vector<std::vector<double>> e_excl;
  std::vector<std::vector<std::vector<double>>> e_excl2;  // [j][l], j != l
};

SymTable make_sym_table(const std::vector<double>& base, bool pairs = true);

template <class T>
struct Neumaier {
  T sum = T(0.0);
  T comp = T(0.0);
  T abs_sum = T(0.0);
  void add(T v) {
    using std::abs;
    const T t = sum + v;
    if (abs(sum) >= abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
    abs_sum += abs(v);
  }
  T value() const { return sum + comp; }
};

}  // namespace wishart
