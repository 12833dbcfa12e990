#include <doctest.h>

#include <cmath>

#include "wishart/engine.hpp"

using namespace wishart;

namespace {

ErrorCode code_of(const EnsembleSpec& s, Method m) {
  try {
    check_method(s, m);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;  // sentinel: accepted
}

}  // namespace

TEST_CASE("method and beta compatibility") {
  const EnsembleSpec c2{2, 3, 2, {1, 2}, {1, 2, 3}};
  const EnsembleSpec r1{2, 3, 1, {1, 2}, {1, 2, 3}};
  CHECK(code_of(r1, Method::ComplexExact) == ErrorCode::BadBeta);
  CHECK(code_of(r1, Method::Character) == ErrorCode::BadBeta);
  CHECK(code_of(r1, Method::LargeN) == ErrorCode::BadBeta);
  CHECK(code_of(c2, Method::RealQuad) == ErrorCode::BadBeta);
  CHECK(code_of(r1, Method::RealDegenerate) == ErrorCode::UnsupportedRegime);
  CHECK(code_of({2, 2, 2, {1, 2}, {1, 2}}, Method::Character) == ErrorCode::UnsupportedRegime);
  CHECK(code_of({3, 2, 2, {1, 2, 3}, {1, 2}}, Method::ComplexExact) == ErrorCode::UnsupportedRegime);
  CHECK(code_of(c2, Method::ComplexExact) == ErrorCode::IoError);
  CHECK(code_of(r1, Method::MonteCarlo) == ErrorCode::IoError);
  CHECK(code_of({2, 2, 1, {1, 1}, {2, 2}}, Method::RealDegenerate) == ErrorCode::IoError);
}

TEST_CASE("pair structure") {
  DegeneratePairSpec pairs;
  CHECK(pair_structure({4, 2, 1, {1, 3, 1, 3}, {2, 2}}, pairs));
  CHECK(pairs.lambda_pairs == std::vector<double>{1, 3});
  CHECK(pairs.gamma_pairs == std::vector<double>{2});
  CHECK_FALSE(pair_structure({3, 2, 1, {1, 1, 1}, {2, 2}}, pairs));
}

TEST_CASE("curves on a shared grid") {
  const EnsembleSpec s{2, 3, 2, {1, 2}, {1, 2, 3}};
  const std::vector<double> grid{0.5, 2.0, 8.0};
  const DensityCurve e = compute_curve(s, Method::ComplexExact, grid);
  const DensityCurve c = compute_curve(s, Method::Character, grid);
  CHECK(e.grid == grid);
  CHECK(e.errors.size() == 3);
  CHECK(c.errors.empty());
  for (int i = 0; i < 3; ++i) CHECK(c.values[i] == doctest::Approx(e.values[i]).epsilon(1e-9));

  CurveOptions o;
  o.samples = 2000;
  o.bins = 10;
  const DensityCurve h = compute_curve(s, Method::MonteCarlo, {0.0, 40.0}, o);
  CHECK(h.bin_edges.size() == 11);
  CHECK(h.values.size() == 10);

  const EnsembleSpec deg{2, 4, 2, {1, 2}, {1, 1, 3, 3}};
  const DensityCurve d = compute_curve(deg, Method::ComplexExact, grid);
  CHECK(d.meta.count("confluent") == 1);
  CHECK_THROWS_AS(compute_curve(s, Method::ComplexExact, {}), Error);
}
