#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wishart/asymptotics.hpp"
#include "wishart/engine.hpp"
#include "wishart/io.hpp"
#include "wishart/montecarlo.hpp"
#include "wishart/parallel.hpp"

#ifndef WISHART_PRESETS_DIR
#define WISHART_PRESETS_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace wishart;

namespace {

struct MethodEntry {
  Method method = Method::ComplexExact;
  std::string label;
  bool corrected = true;
  bool extended = false;
};

struct Threshold {
  std::string metric;
  double limit = 0.0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  EnsembleSpec spec;
  std::vector<MethodEntry> methods;
  std::optional<double> grid_from, grid_to;
  std::size_t grid_count = 200;
  std::vector<double> grid_points;
  long samples = 100000;
  std::uint64_t seed = 1;
  int bins = 100;
  RealQuadConfig quad;
  std::string compare_a, compare_b;
  std::vector<Threshold> thresholds;
};

struct Flags {
  std::string config, preset, out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<long> samples;
  std::optional<int> beta;
  std::string grid, range;
  std::vector<std::string> methods;
  bool uncorrected = false;
  bool extended = false;
  std::string samples_file;
};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

MethodEntry parse_method(const json& j) {
  MethodEntry m;
  if (j.is_string()) {
    m.method = method_from_name(j.get<std::string>());
  } else {
    m.method = method_from_name(j.at("method").get<std::string>());
    m.corrected = j.value("corrected", true);
    m.extended = j.value("extended", false);
    m.label = j.value("label", std::string());
  }
  if (m.label.empty()) m.label = lower(method_name(m.method));
  return m;
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  try {
    c.name = j.value("name", c.name);
    c.spec = spec_from_json(j.at("spec"));
    if (j.contains("methods"))
      for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m));
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (g.is_array()) {
        c.grid_points = g.get<std::vector<double>>();
      } else {
        if (g.contains("from")) c.grid_from = g.at("from").get<double>();
        if (g.contains("to")) c.grid_to = g.at("to").get<double>();
        c.grid_count = g.value("count", c.grid_count);
      }
    }
    if (j.contains("mc")) {
      const json& m = j.at("mc");
      c.samples = m.value("samples", c.samples);
      c.seed = m.value("seed", c.seed);
      c.bins = m.value("bins", c.bins);
    }
    if (j.contains("quad")) c.quad = quad_config_from_json(j.at("quad"));
    if (j.contains("compare")) {
      const json& m = j.at("compare");
      c.compare_a = m.value("a", std::string());
      c.compare_b = m.value("b", std::string());
      if (m.contains("thresholds"))
        for (const auto& [k, v] : m.at("thresholds").items()) c.thresholds.push_back({k, v.get<double>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, std::string("config: ") + e.what());
  }
  return c;
}

std::vector<double> split_numbers(const std::string& s, std::size_t expect, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ':')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadConfig, std::string(flag) + ": bad number '" + part + "'");
    }
  }
  if (out.size() != expect) throw Error(ErrorCode::BadConfig, std::string(flag) + ": wrong field count");
  return out;
}

ExperimentConfig load(const Flags& f) {
  if (f.config.empty() == f.preset.empty())
    throw Error(ErrorCode::BadConfig, "give exactly one of --config or --preset");
  std::string path = f.config;
  if (!f.preset.empty()) {
    path = (fs::path(WISHART_PRESETS_DIR) / (f.preset + ".json")).string();
    if (!fs::exists(path)) throw Error(ErrorCode::BadConfig, "unknown preset " + f.preset);
  }
  ExperimentConfig c = parse_config(read_json(path));
  if (f.seed) c.seed = *f.seed;
  if (f.samples) c.samples = *f.samples;
  if (f.beta) c.spec.beta = *f.beta;
  if (!f.methods.empty()) {
    c.methods.clear();
    for (const auto& m : f.methods) c.methods.push_back(parse_method(json(m)));
  }
  for (auto& m : c.methods) {
    if (f.uncorrected) m.corrected = false;
    if (f.extended) m.extended = true;
  }
  if (!f.grid.empty()) {
    const auto v = split_numbers(f.grid, 3, "--grid");
    if (!(v[2] >= 2)) throw Error(ErrorCode::BadConfig, "--grid: count must be at least 2");
    c.grid_points.clear();
    c.grid_from = v[0];
    c.grid_to = v[1];
    c.grid_count = static_cast<std::size_t>(v[2]);
  }
  if (!f.range.empty()) {
    const auto v = split_numbers(f.range, 2, "--range");
    c.grid_points.clear();
    c.grid_from = v[0];
    c.grid_to = v[1];
  }
  if (c.samples < 1) throw Error(ErrorCode::BadConfig, "samples must be positive");
  if (c.bins < 1) throw Error(ErrorCode::BadConfig, "bins must be positive");
  validate_spec(c.spec);
  return c;
}

std::vector<double> make_grid(const ExperimentConfig& c) {
  if (!c.grid_points.empty()) return c.grid_points;
  if (c.grid_from && c.grid_to) {
    if (!(*c.grid_to > *c.grid_from)) throw Error(ErrorCode::EmptyRange, "grid range is empty");
    return linear_grid(*c.grid_from, *c.grid_to, c.grid_count);
  }
  return default_grid(c.spec, c.grid_count);
}

CurveOptions options_for(const ExperimentConfig& c, const MethodEntry& m) {
  CurveOptions o;
  o.quad = c.quad;
  o.corrected = m.corrected;
  o.extended = m.extended;
  o.samples = c.samples;
  o.seed = c.seed;
  o.bins = c.bins;
  return o;
}

json run_info(const ExperimentConfig& c, const MethodEntry& m, double seconds) {
  json j{{"label", m.label},
         {"elapsed_seconds", seconds},
         {"threads", thread_count()},
         {"experiment", c.name}};
  if (m.method == Method::RealQuad || m.method == Method::RealDegenerate) j["quad"] = quad_config_to_json(c.quad);
  if (m.method == Method::MonteCarlo) j["mc"] = json{{"samples", c.samples}, {"seed", c.seed}, {"bins", c.bins}};
  if (m.method == Method::Character) j["character"] = json{{"corrected", m.corrected}, {"extended", m.extended}};
  return j;
}

DensityCurve produce(const ExperimentConfig& c, const MethodEntry& m, const std::vector<double>& grid,
                     const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  DensityCurve curve = compute_curve(c.spec, m.method, grid, options_for(c, m));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_curve_csv((out / (m.label + ".csv")).string(), curve);
  json meta = curve_metadata(curve);
  meta["run"] = run_info(c, m, secs);
  write_json((out / (m.label + ".json")).string(), meta);
  std::cout << m.label << ": " << curve.grid.size() << " points, " << secs << " s\n";
  return curve;
}

void check_all(const ExperimentConfig& c) {
  if (c.methods.empty()) throw Error(ErrorCode::BadConfig, "no methods requested");
  for (const auto& m : c.methods) check_method(c.spec, m.method);
}

int cmd_density(const ExperimentConfig& c, const fs::path& out) {
  check_all(c);
  const auto grid = make_grid(c);
  for (const auto& m : c.methods) produce(c, m, grid, out);
  return 0;
}

int cmd_mc(const ExperimentConfig& c, const fs::path& out, const std::string& samples_file) {
  MethodEntry m;
  m.method = Method::MonteCarlo;
  m.label = "montecarlo";
  McConfig mc;
  mc.spec = c.spec;
  mc.samples = c.samples;
  mc.seed = c.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const auto values = sample_wishart(mc);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  SampleFileHeader h{c.spec.p, c.spec.n, c.spec.beta, c.seed, static_cast<std::uint64_t>(c.samples)};
  const std::string bin = samples_file.empty() ? (out / "samples.bin").string() : samples_file;
  write_samples(bin, h, values);
  const auto grid = make_grid(c);
  const double lo = std::min(0.0, grid.front());
  DensityCurve curve = histogram_density(values, uniform_edges(lo, grid.back(), c.bins));
  curve.spec = c.spec;
  write_curve_csv((out / "montecarlo.csv").string(), curve);
  json meta = curve_metadata(curve);
  meta["run"] = run_info(c, m, secs);
  meta["samples_file"] = bin;
  double sum = 0.0;
  for (double v : values) sum += v;
  meta["sample_mean"] = sum / static_cast<double>(values.size());
  write_json((out / "montecarlo.json").string(), meta);
  std::cout << "montecarlo: " << c.samples << " draws, " << secs << " s\n";
  return 0;
}

int cmd_asymptotic(ExperimentConfig c, const fs::path& out) {
  c.methods.clear();
  if (c.spec.beta == 2 && c.spec.p <= c.spec.n) c.methods.push_back(parse_method(json("LargeN")));
  if (c.spec.p <= c.spec.n) c.methods.push_back(parse_method(json("MarchenkoPastur")));
  check_all(c);
  const auto grid = make_grid(c);
  json skipped = json::object();
  for (const auto& m : c.methods) {
    try {
      produce(c, m, grid, out);
    } catch (const Error& e) {
      // The exact large-n form runs out of precision for large p; keep the limiting curve.
      if (m.method != Method::LargeN || e.code() != ErrorCode::NotConverged) throw;
      skipped[m.label] = error_json(e.code(), e.what());
      std::cerr << m.label << ": skipped, " << e.what() << '\n';
    }
  }
  const double lbar = effective_mean(c.spec.lambda), gbar = effective_mean(c.spec.gamma);
  const auto [lo, hi] = marchenko_pastur_support(c.spec.p, c.spec.n, lbar, gbar);
  const double mid = 0.5 * (lo + hi);
  const StationaryPoint sp = stationary_point({mid, 0.0}, c.spec.n, c.spec.p, lbar, gbar);
  json j{{"lambda_bar", lbar},
         {"gamma_bar", gbar},
         {"support", {lo, hi}},
         {"stationary_point_at_center",
          {{"x", mid},
           {"sigma0", {sp.sigma0.real(), sp.sigma0.imag()}},
           {"rho0", {sp.rho0.real(), sp.rho0.imag()}}}}};
  if (!skipped.empty()) j["skipped"] = skipped;
  write_json((out / "asymptotic.json").string(), j);
  return 0;
}

const MethodEntry& find_entry(const ExperimentConfig& c, const std::string& key) {
  for (const auto& m : c.methods)
    if (m.label == key || lower(method_name(m.method)) == lower(key)) return m;
  throw Error(ErrorCode::BadConfig, "compare: method '" + key + "' not among the configured methods");
}

double metric_value(const ComparisonReport& r, const std::string& name) {
  if (name == "l1") return r.l1;
  if (name == "sup") return r.sup;
  if (name == "mean_delta") return std::abs(r.mean_delta);
  if (name == "second_moment_delta") return std::abs(r.second_moment_delta);
  if (name == "fraction_outside") return r.fraction_outside;
  throw Error(ErrorCode::BadConfig, "unknown metric " + name);
}

int cmd_compare(const ExperimentConfig& c, const fs::path& out) {
  if (c.compare_a.empty() || c.compare_b.empty())
    throw Error(ErrorCode::BadConfig, "compare needs compare.a and compare.b");
  const MethodEntry& a = find_entry(c, c.compare_a);
  const MethodEntry& b = find_entry(c, c.compare_b);
  check_method(c.spec, a.method);
  check_method(c.spec, b.method);
  for (const auto& t : c.thresholds) metric_value(ComparisonReport{}, t.metric);
  const auto grid = make_grid(c);
  const DensityCurve ca = produce(c, a, grid, out);
  const DensityCurve cb = produce(c, b, grid, out);
  const ComparisonReport r = compare_densities(ca, cb);
  json report{{"a", a.label},
              {"b", b.label},
              {"l1", r.l1},
              {"sup", r.sup},
              {"mean_a", r.mean_a},
              {"mean_b", r.mean_b},
              {"second_a", r.second_a},
              {"second_b", r.second_b},
              {"mean_delta", r.mean_delta},
              {"second_moment_delta", r.second_moment_delta},
              {"fraction_outside", r.fraction_outside},
              {"error_bar_sigma", r.error_bar_sigma},
              {"bins_compared", r.bins_compared}};
  json checks = json::array();
  std::vector<std::string> failed;
  for (const auto& t : c.thresholds) {
    const double v = metric_value(r, t.metric);
    const bool ok = v < t.limit;
    checks.push_back({{"metric", t.metric}, {"value", v}, {"limit", t.limit}, {"pass", ok}});
    if (!ok) failed.push_back(t.metric);
  }
  report["thresholds"] = checks;
  report["pass"] = failed.empty();
  write_json((out / "compare.json").string(), report);
  std::cout << "compare " << a.label << " vs " << b.label << ": l1=" << format_double(r.l1)
            << " sup=" << format_double(r.sup) << '\n';
  if (!failed.empty()) {
    for (const auto& m : failed)
      std::cerr << "threshold failed: " << m << " = " << format_double(metric_value(r, m)) << '\n';
    return 2;
  }
  return 0;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "experiment JSON");
  app->add_option("--preset", f.preset, "fig1, fig2, fig3 or mp");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--seed", f.seed, "Monte Carlo seed");
  app->add_option("--samples", f.samples, "Monte Carlo draws");
  app->add_option("--grid", f.grid, "a:b:count");
  app->add_option("--range", f.range, "a:b");
  app->add_option("--beta", f.beta, "override beta");
  app->add_option("--method", f.methods, "override the method list");
  app->add_flag("--uncorrected", f.uncorrected, "character formula without the T-row fix");
  app->add_flag("--extended", f.extended, "character formula in double-double");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue densities of doubly correlated Wishart matrices"};
  app.require_subcommand(1);
  Flags f;
  auto* density = app.add_subcommand("density", "evaluate the configured methods on a grid");
  auto* mc = app.add_subcommand("mc", "Monte Carlo samples and histogram");
  auto* compare = app.add_subcommand("compare", "compare two methods against thresholds");
  auto* asymptotic = app.add_subcommand("asymptotic", "large-n and Marchenko-Pastur curves");
  for (auto* s : {density, mc, compare, asymptotic}) add_common(s, f);
  mc->add_option("--samples-file", f.samples_file, "binary sample file path");
  CLI11_PARSE(app, argc, argv);

  fs::path out(f.out);
  try {
    const ExperimentConfig c = load(f);
    fs::create_directories(out);
    if (density->parsed()) return cmd_density(c, out);
    if (mc->parsed()) return cmd_mc(c, out, f.samples_file);
    if (compare->parsed()) return cmd_compare(c, out);
    return cmd_asymptotic(c, out);
  } catch (const Error& e) {
    const json err = error_json(e.code(), e.what());
    std::cerr << err.dump() << '\n';
    std::error_code ec;
    if (fs::is_directory(out, ec)) {
      try {
        write_json((out / "error.json").string(), err);
      } catch (const Error&) {
      }
    }
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << error_json(ErrorCode::IoError, e.what()).dump() << '\n';
    return 1;
  }
}
