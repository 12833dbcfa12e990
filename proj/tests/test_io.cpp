#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "wishart/io.hpp"

using namespace wishart;

namespace {

std::string temp(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("17-digit formatting round-trips doubles") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::pow(10.0, u(rng) / 10) * (i % 2 ? -1 : 1);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("curve CSV round trip is bit-exact") {
  DensityCurve c;
  c.grid = {0.1, 1.0 / 3, 2.5e-300, 7e12};
  c.values = {std::exp(-0.1), 2.0 / 3, 1e-310, 0.0};
  const auto path = temp("wishart_curve.csv");
  write_curve_csv(path, c);
  std::ifstream is(path, std::ios::binary);
  std::string first;
  std::getline(is, first);
  CHECK(first == "x,density\r");
  const DensityCurve back = read_curve_csv(path);
  CHECK(back.grid == c.grid);
  CHECK(back.values == c.values);
  CHECK(back.errors.empty());

  c.errors = {1e-3, 2e-3, 0.0, 5.0};
  write_curve_csv(path, c);
  CHECK(read_curve_csv(path).errors == c.errors);
  std::filesystem::remove(path);
}

TEST_CASE("CSV reader rejects foreign files") {
  const auto path = temp("wishart_bad.csv");
  std::ofstream(path) << "a,b\n1,2\n";
  CHECK_THROWS_AS(read_curve_csv(path), Error);
  std::ofstream(path) << "x,density\n1,abc\n";
  CHECK_THROWS_AS(read_curve_csv(path), Error);
  std::filesystem::remove(path);
}

TEST_CASE("spec JSON round trip and identity shorthand") {
  const EnsembleSpec s{2, 3, 1, {0.1, 1.0 / 7}, {1, 2, 3}};
  const EnsembleSpec back = spec_from_json(json::parse(spec_to_json(s).dump()));
  CHECK(back.lambda == s.lambda);
  CHECK(back.gamma == s.gamma);
  CHECK(back.beta == 1);
  const EnsembleSpec id = spec_from_json(json::parse(R"({"p":3,"n":4,"beta":2,"lambda":"identity","gamma":[1,2,3,4]})"));
  CHECK(id.lambda == std::vector<double>{1, 1, 1});
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"p":3,"n":4,"beta":2,"lambda":"eye","gamma":[1,2,3,4]})")), Error);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"p":3})")), Error);
}

TEST_CASE("quad config defaults and validation") {
  const RealQuadConfig d = quad_config_from_json(json::object());
  CHECK(d.eps == RealQuadConfig{}.eps);
  const RealQuadConfig c = quad_config_from_json(json::parse(R"({"eps":0.005,"nodes":24})"));
  CHECK(c.eps == 0.005);
  CHECK(c.nodes == 24);
  CHECK(quad_config_from_json(quad_config_to_json(c)).nodes == 24);
  CHECK_THROWS_AS(quad_config_from_json(json::parse(R"({"eps":-1})")), Error);
}

TEST_CASE("metadata and error JSON") {
  DensityCurve c;
  c.method = Method::MonteCarlo;
  c.spec = {1, 1, 2, {1}, {1}};
  c.grid = {0.5};
  c.values = {1.0};
  c.bin_edges = {0.0, 1.0};
  c.meta["seed"] = 3;
  const json m = curve_metadata(c);
  CHECK(m["method"] == "MonteCarlo");
  CHECK(m["bin_edges"].size() == 2);
  CHECK(m["meta"]["seed"] == 3.0);
  const json e = error_json(ErrorCode::BadBeta, "nope");
  CHECK(e["error"] == "BadBeta");
  CHECK(e["message"] == "nope");
}
