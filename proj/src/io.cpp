#include "wishart/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wishart {

json spec_to_json(const EnsembleSpec& spec) {
  return json{{"p", spec.p}, {"n", spec.n}, {"beta", spec.beta}, {"lambda", spec.lambda},
              {"gamma", spec.gamma}};
}

namespace {

// "identity" stands for a list of ones.
std::vector<double> eigenvalue_list(const json& j, int size) {
  if (j.is_string()) {
    if (j.get<std::string>() != "identity" || size < 1)
      throw Error(ErrorCode::BadConfig, "spec: eigenvalue list must be an array or \"identity\"");
    return std::vector<double>(static_cast<std::size_t>(size), 1.0);
  }
  return j.get<std::vector<double>>();
}

}  // namespace

EnsembleSpec spec_from_json(const json& j) {
  EnsembleSpec s;
  try {
    s.p = j.at("p").get<int>();
    s.n = j.at("n").get<int>();
    s.beta = j.at("beta").get<int>();
    s.lambda = eigenvalue_list(j.at("lambda"), s.p);
    s.gamma = eigenvalue_list(j.at("gamma"), s.n);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, std::string("spec: ") + e.what());
  }
  return s;
}

json quad_config_to_json(const RealQuadConfig& c) {
  return json{{"eps", c.eps},
              {"tail_cut", c.tail_cut},
              {"nodes", c.nodes},
              {"angle_nodes", c.angle_nodes},
              {"tolerance", c.tolerance},
              {"abs_tolerance", c.abs_tolerance},
              {"damping", c.damping},
              {"max_evaluations", c.max_evaluations}};
}

RealQuadConfig quad_config_from_json(const json& j) {
  RealQuadConfig c;
  try {
    c.eps = j.value("eps", c.eps);
    c.tail_cut = j.value("tail_cut", c.tail_cut);
    c.nodes = j.value("nodes", c.nodes);
    c.angle_nodes = j.value("angle_nodes", c.angle_nodes);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.abs_tolerance = j.value("abs_tolerance", c.abs_tolerance);
    c.damping = j.value("damping", c.damping);
    c.max_evaluations = j.value("max_evaluations", c.max_evaluations);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, std::string("quad config: ") + e.what());
  }
  validate_quad_config(c);
  return c;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_curve_csv(const std::string& path, const DensityCurve& curve) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path);
  const bool with_err = curve.errors.size() == curve.grid.size() && !curve.errors.empty();
  os << (with_err ? "x,density,error\r\n" : "x,density\r\n");
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    os << format_double(curve.grid[i]) << ',' << format_double(curve.values[i]);
    if (with_err) os << ',' << format_double(curve.errors[i]);
    os << "\r\n";
  }
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path);
}

DensityCurve read_curve_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  std::getline(is, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,density" && line != "x,density,error")
    throw Error(ErrorCode::IoError, "unexpected CSV header in " + path);
  const bool with_err = line == "x,density,error";
  DensityCurve c;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (r.ec != std::errc()) throw Error(ErrorCode::IoError, "bad number in " + path);
      cells.push_back(v);
    }
    if (cells.size() != (with_err ? 3u : 2u)) throw Error(ErrorCode::IoError, "bad row in " + path);
    c.grid.push_back(cells[0]);
    c.values.push_back(cells[1]);
    if (with_err) c.errors.push_back(cells[2]);
  }
  return c;
}

json curve_metadata(const DensityCurve& curve) {
  json j{{"method", method_name(curve.method)},
         {"spec", spec_to_json(curve.spec)},
         {"points", curve.grid.size()},
         {"dual", curve.dual},
         {"delta_mass_at_zero", curve.delta_mass_at_zero}};
  if (!curve.bin_edges.empty()) j["bin_edges"] = curve.bin_edges;
  json meta = json::object();
  for (const auto& [k, v] : curve.meta) meta[k] = v;
  j["meta"] = meta;
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path);
  os << j.dump(2) << '\n';
}

json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, path + ": " + e.what());
  }
}

json error_json(ErrorCode code, const std::string& message) {
  return json{{"error", error_name(code)}, {"message", message}};
}

}  // namespace wishart
