#include "wishart/symfunc.hpp"

#include <limits>

namespace wishart {

double elementary_symmetric(const std::vector<double>& values, int k,
                            const std::vector<int>& excluded) {
  if (k < 0) return 0.0;
  const auto e = elementary_symmetric_all(values, excluded);
  const std::size_t remaining = values.size() - std::count_if(excluded.begin(), excluded.end(), [&](int j) {
    return j >= 0 && j < static_cast<int>(values.size());
  });
  if (static_cast<std::size_t>(k) > remaining) return 0.0;
  return e[k];
}

SignedLog delta_product(const std::vector<double>& values, int l, double gap) {
  SignedLog r;
  const double il = 1.0 / values.at(l);
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (static_cast<int>(j) == l) continue;
    const double ij = 1.0 / values[j];
    const double d = il - ij;
    if (std::abs(d) < gap * std::max(std::abs(il), std::abs(ij)))
      throw Error(ErrorCode::DegenerateEigenvalues, "eigenvalues closer than the distinctness gap");
    r.log_abs += std::log(std::abs(d));
    if (d < 0) r.sign = -r.sign;
  }
  return r;
}

SignedLog vandermonde(const std::vector<double>& values) {
  SignedLog r;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double d = values[j] - values[i];
      if (d == 0.0) {
        r.log_abs = -std::numeric_limits<double>::infinity();
        r.sign = 0;
        return r;
      }
      r.log_abs += std::log(std::abs(d));
      if (d < 0) r.sign = -r.sign;
    }
  return r;
}

SymTable make_sym_table(const std::vector<double>& base, bool pairs) {
  SymTable t;
  const int n = static_cast<int>(base.size());
  t.base = base;
  t.e_full = elementary_symmetric_all(base);
  t.e_excl.resize(n);
  for (int j = 0; j < n; ++j) t.e_excl[j] = elementary_symmetric_all(base, {j});
  if (pairs) {
    t.e_excl2.assign(n, std::vector<std::vector<double>>(n));
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        if (j != l) t.e_excl2[j][l] = elementary_symmetric_all(base, {j, l});
  }
  return t;
}

}  // namespace wishart
