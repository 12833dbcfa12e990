#include "wishart/montecarlo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "wishart/parallel.hpp"

namespace wishart {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr char kMagic[4] = {'W', 'S', 'M', 'C'};
constexpr std::uint16_t kVersion = 1;

void put_le(std::ostream& os, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::istream& is, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == EOF) throw Error(ErrorCode::IoError, "truncated sample file");
    v |= static_cast<std::uint64_t>(c & 0xFF) << (8 * i);
  }
  return v;
}

// Average of the piecewise-linear curve over [lo, hi].
double bin_average(const DensityCurve& c, double lo, double hi) {
  auto value_at = [&](double x) {
    const auto& g = c.grid;
    if (x <= g.front()) return c.values.front();
    if (x >= g.back()) return c.values.back();
    const auto it = std::upper_bound(g.begin(), g.end(), x);
    const std::size_t i = it - g.begin();
    const double t = (x - g[i - 1]) / (g[i] - g[i - 1]);
    return (1 - t) * c.values[i - 1] + t * c.values[i];
  };
  std::vector<double> xs{lo};
  for (double g : c.grid)
    if (g > lo && g < hi) xs.push_back(g);
  xs.push_back(hi);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(value_at(x));
  return trapezoid(xs, ys) / (hi - lo);
}

bool is_histogram(const DensityCurve& c) { return c.bin_edges.size() == c.grid.size() + 1; }

void curve_moments(const DensityCurve& c, double& m1, double& m2) {
  m1 = m2 = 0.0;
  if (is_histogram(c)) {
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      const double w = c.bin_edges[i + 1] - c.bin_edges[i];
      m1 += c.grid[i] * c.values[i] * w;
      m2 += c.grid[i] * c.grid[i] * c.values[i] * w;
    }
    return;
  }
  std::vector<double> y1, y2;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    y1.push_back(c.grid[i] * c.values[i]);
    y2.push_back(c.grid[i] * c.grid[i] * c.values[i]);
  }
  m1 = trapezoid(c.grid, y1);
  m2 = trapezoid(c.grid, y2);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t draw)
    : key_(splitmix64(seed ^ splitmix64(draw))) {}

std::uint64_t CounterRng::next() { return splitmix64(key_ + (counter_++) * kGolden); }

double CounterRng::uniform() { return (double(next() >> 11) + 1.0) * 0x1.0p-53; }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol, int max_sweeps) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      diag += a(i, i) * a(i, i);
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off <= tol * tol * diag || off == 0.0) {
      std::vector<double> ev(n);
      for (Eigen::Index i = 0; i < n; ++i) ev[i] = a(i, i);
      std::sort(ev.begin(), ev.end());
      return ev;
    }
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  throw Error(ErrorCode::EigSolverFailure, "Jacobi iteration did not converge");
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = h.real();
  m.bottomRightCorner(n, n) = h.real();
  m.topRightCorner(n, n) = -h.imag();
  m.bottomLeftCorner(n, n) = h.imag();
  const std::vector<double> all = jacobi_eigenvalues(m);
  std::vector<double> ev(n);
  for (Eigen::Index i = 0; i < n; ++i) ev[i] = 0.5 * (all[2 * i] + all[2 * i + 1]);
  return ev;
}

std::vector<double> draw_eigenvalues(const EnsembleSpec& spec, std::uint64_t seed,
                                     std::uint64_t draw) {
  const int p = spec.p, n = spec.n;
  CounterRng rng(seed, draw);
  std::vector<double> ev;
  if (spec.beta == 1) {
    Eigen::MatrixXd w(p, n);
    for (int i = 0; i < p; ++i)
      for (int k = 0; k < n; ++k) w(i, k) = std::sqrt(spec.lambda[i] * spec.gamma[k]) * rng.normal();
    Eigen::MatrixXd ww = Eigen::MatrixXd::Zero(p, p);
    ww.selfadjointView<Eigen::Lower>().rankUpdate(w);
    ww.triangularView<Eigen::StrictlyUpper>() = ww.transpose();
    if (p <= 64) {
      ev = jacobi_eigenvalues(ww);
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ww, Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success)
        throw Error(ErrorCode::EigSolverFailure, "eigensolver did not converge");
      ev.assign(es.eigenvalues().data(), es.eigenvalues().data() + p);
    }
  } else {
    Eigen::MatrixXcd w(p, n);
    const double h = std::sqrt(0.5);
    for (int i = 0; i < p; ++i)
      for (int k = 0; k < n; ++k) {
        const double re = rng.normal(), im = rng.normal();
        w(i, k) = std::sqrt(spec.lambda[i] * spec.gamma[k]) * std::complex<double>(h * re, h * im);
      }
    Eigen::MatrixXcd ww = Eigen::MatrixXcd::Zero(p, p);
    ww.selfadjointView<Eigen::Lower>().rankUpdate(w);
    ww.triangularView<Eigen::StrictlyUpper>() = ww.adjoint();
    if (p <= 64) {
      ev = hermitian_eigenvalues(ww);
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ww, Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success)
        throw Error(ErrorCode::EigSolverFailure, "eigensolver did not converge");
      ev.assign(es.eigenvalues().data(), es.eigenvalues().data() + p);
    }
  }
  for (double& v : ev) v = std::max(v, 0.0);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> sample_wishart(const McConfig& cfg) {
  validate_spec(cfg.spec);
  if (cfg.samples < 1) throw Error(ErrorCode::BadConfig, "samples must be at least 1");
  const int p = cfg.spec.p;
  std::vector<double> out(static_cast<std::size_t>(cfg.samples) * p);
  parallel_for(static_cast<std::size_t>(cfg.samples), [&](std::size_t d) {
    const auto ev = draw_eigenvalues(cfg.spec, cfg.seed, d);
    std::copy(ev.begin(), ev.end(), out.begin() + d * p);
  });
  return out;
}

std::vector<double> uniform_edges(double lo, double hi, int bins) {
  if (!(hi > lo) || bins < 1) throw Error(ErrorCode::EmptyRange, "invalid histogram range");
  std::vector<double> e(bins + 1);
  for (int i = 0; i <= bins; ++i) e[i] = lo + (hi - lo) * i / bins;
  return e;
}

DensityCurve histogram_density(const std::vector<double>& values, const std::vector<double>& edges) {
  if (edges.size() < 2) throw Error(ErrorCode::EmptyRange, "need at least one bin");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw Error(ErrorCode::EmptyRange, "bin edges must increase");
  const std::size_t bins = edges.size() - 1;
  std::vector<double> counts(bins, 0.0);
  double total = 0.0;
  for (double v : values) {
    if (v < edges.front() || v > edges.back()) continue;
    std::size_t i = std::upper_bound(edges.begin(), edges.end(), v) - edges.begin();
    i = std::min(std::max<std::size_t>(i, 1), bins) - 1;
    counts[i] += 1.0;
    total += 1.0;
  }
  if (total == 0.0) throw Error(ErrorCode::EmptyRange, "no samples inside the binned range");
  DensityCurve c;
  c.method = Method::MonteCarlo;
  c.bin_edges = edges;
  for (std::size_t i = 0; i < bins; ++i) {
    const double w = edges[i + 1] - edges[i];
    c.grid.push_back(0.5 * (edges[i] + edges[i + 1]));
    c.values.push_back(counts[i] / (total * w));
    c.errors.push_back(std::sqrt(counts[i]) / (total * w));
  }
  c.meta["samples_in_range"] = total;
  c.meta["samples_total"] = static_cast<double>(values.size());
  return c;
}

ComparisonReport compare_densities(const DensityCurve& a, const DensityCurve& b,
                                   double error_bar_sigma) {
  if (a.grid.size() < 2 && !is_histogram(a)) throw Error(ErrorCode::EmptyRange, "curve too short");
  if (b.grid.size() < 2 && !is_histogram(b)) throw Error(ErrorCode::EmptyRange, "curve too short");
  ComparisonReport r;
  r.error_bar_sigma = error_bar_sigma;
  curve_moments(a, r.mean_a, r.second_a);
  curve_moments(b, r.mean_b, r.second_b);
  r.mean_delta = std::abs(r.mean_a - r.mean_b);
  r.second_moment_delta = std::abs(r.second_a - r.second_b);
  const bool ha = is_histogram(a), hb = is_histogram(b);
  if (ha || hb) {
    const DensityCurve& h = ha ? a : b;
    const DensityCurve& c = ha ? b : a;
    const double lo = c.grid.front(), hi = c.grid.back();
    int outside = 0;
    for (std::size_t i = 0; i < h.grid.size(); ++i) {
      const double e0 = h.bin_edges[i], e1 = h.bin_edges[i + 1];
      if (e1 <= lo || e0 >= hi) continue;
      const double ref = (ha && hb) ? c.values[i] : bin_average(c, std::max(e0, lo), std::min(e1, hi));
      const double d = std::abs(h.values[i] - ref);
      r.l1 += d * (e1 - e0);
      r.sup = std::max(r.sup, d);
      double err = h.errors.empty() ? 0.0 : h.errors[i];
      if (ha && hb && !c.errors.empty()) err = std::hypot(err, c.errors[i]);
      if (d > error_bar_sigma * err) ++outside;
      ++r.bins_compared;
    }
    if (r.bins_compared == 0) throw Error(ErrorCode::DisjointSupports, "curves do not overlap");
    r.fraction_outside = double(outside) / r.bins_compared;
    return r;
  }
  const double lo = std::max(a.grid.front(), b.grid.front());
  const double hi = std::min(a.grid.back(), b.grid.back());
  if (!(hi > lo)) throw Error(ErrorCode::DisjointSupports, "curves do not overlap");
  std::vector<double> xs;
  for (double x : a.grid)
    if (x >= lo && x <= hi) xs.push_back(x);
  for (double x : b.grid)
    if (x >= lo && x <= hi) xs.push_back(x);
  xs.push_back(lo);
  xs.push_back(hi);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  auto interp = [](const DensityCurve& c, double x) {
    const auto it = std::lower_bound(c.grid.begin(), c.grid.end(), x);
    const std::size_t i = it - c.grid.begin();
    if (i == 0) return c.values.front();
    if (i >= c.grid.size()) return c.values.back();
    const double t = (x - c.grid[i - 1]) / (c.grid[i] - c.grid[i - 1]);
    return (1 - t) * c.values[i - 1] + t * c.values[i];
  };
  std::vector<double> d;
  for (double x : xs) {
    d.push_back(std::abs(interp(a, x) - interp(b, x)));
    r.sup = std::max(r.sup, d.back());
  }
  r.l1 = trapezoid(xs, d);
  r.bins_compared = static_cast<int>(xs.size());
  return r;
}

void write_samples(const std::string& path, const SampleFileHeader& header,
                   const std::vector<double>& values) {
  if (values.size() != header.count * static_cast<std::uint64_t>(header.p))
    throw Error(ErrorCode::DimensionMismatch, "sample count does not match header");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path);
  os.write(kMagic, 4);
  put_le(os, kVersion, 2);
  put_le(os, static_cast<std::uint64_t>(header.beta), 2);
  put_le(os, static_cast<std::uint64_t>(header.p), 4);
  put_le(os, static_cast<std::uint64_t>(header.n), 4);
  put_le(os, header.seed, 8);
  put_le(os, header.count, 8);
  for (double v : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_le(os, bits, 8);
  }
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::vector<double> read_samples(const std::string& path, SampleFileHeader& header) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || !std::equal(magic, magic + 4, kMagic))
    throw Error(ErrorCode::IoError, "not a sample file: " + path);
  if (get_le(is, 2) != kVersion) throw Error(ErrorCode::IoError, "unsupported sample file version");
  header.beta = static_cast<int>(get_le(is, 2));
  header.p = static_cast<int>(get_le(is, 4));
  header.n = static_cast<int>(get_le(is, 4));
  header.seed = get_le(is, 8);
  header.count = get_le(is, 8);
  std::vector<double> values(header.count * static_cast<std::uint64_t>(header.p));
  for (double& v : values) {
    const std::uint64_t bits = get_le(is, 8);
    std::memcpy(&v, &bits, 8);
  }
  return values;
}

}  // namespace wishart
