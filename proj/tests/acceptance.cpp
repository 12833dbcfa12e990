#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "wishart/asymptotics.hpp"
#include "wishart/character.hpp"
#include "wishart/complex_density.hpp"
#include "wishart/montecarlo.hpp"
#include "wishart/parallel.hpp"
#include "wishart/quadrature.hpp"
#include "wishart/real_density.hpp"
#include "wishart/specfun.hpp"
#include "wishart/symfunc.hpp"

using namespace wishart;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, double seconds, double budget, const std::string& detail) {
  const bool in_time = seconds < budget;
  if (!(ok && in_time)) ++failures;
  std::printf("criterion %d %s  %s  [%.1f s, budget %.0f s]\n", id, ok && in_time ? "PASS" : "FAIL",
              detail.c_str(), seconds, budget);
  std::fflush(stdout);
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

const EnsembleSpec kFig1{2, 5, 2, {5.9, 1.1}, {0.3, 2.7, 2.5, 2.8, 5.6}};
const EnsembleSpec kFig2{5, 6, 2, {5.9, 1.1, 4.2, 2, 50}, {0.3, 2.7, 2.5, 2.8, 5.6, 1}};
const EnsembleSpec kReal22{2, 2, 1, {1, 2}, {1, 3}};

// Curve sampled on a grid covering [0, x_max], dense near zero.
DensityCurve sampled(const std::function<double(double)>& f, double x_max, int count) {
  DensityCurve c;
  c.grid = linear_grid(x_max / count / 100, x_max, count);
  c.values.resize(c.grid.size());
  parallel_for(c.grid.size(), [&](std::size_t i) { c.values[i] = f(c.grid[i]); });
  return c;
}

void criterion1() {
  const auto t0 = Clock::now();
  const auto plan = make_complex_plan({1, 1, 2, {1.0}, {1.0}});
  double c_err = 0.0, r_err = 0.0;
  for (double x : {0.1, 1.0, 5.0}) {
    c_err = std::max(c_err, std::abs(density_exact_c2(plan, x) - std::exp(-x)));
    const double chi = std::exp(-x / 2) / std::sqrt(2 * std::numbers::pi * x);
    r_err = std::max(r_err, std::abs(density_quad_r1({1, 1, 1, {1.0}, {1.0}}, x).value - chi));
  }
  report(1, c_err < 1e-10 && r_err < 1e-3, since(t0), 60,
         "complex max|S-e^-x| = " + fmt("%.2e", c_err) + ", real max|S-chi2| = " + fmt("%.2e", r_err));
}

void criterion2() {
  const auto t0 = Clock::now();
  const auto plan = make_complex_plan(kFig1);
  const DensityCurve exact = sampled([&](double x) { return density_exact_c2(plan, x); }, 300.0, 3000);
  McConfig mc{kFig1, 100000, 20120901};
  const DensityCurve hist = histogram_density(sample_wishart(mc), uniform_edges(0.0, 300.0, 100));
  const ComparisonReport r = compare_densities(exact, hist);
  report(2, r.l1 < 0.02 && r.fraction_outside <= 0.05, since(t0), 120,
         "L1 = " + fmt("%.4f", r.l1) + ", bins outside 2-sigma counting bars = " +
             fmt("%.0f%%", 100 * r.fraction_outside) + " of " + std::to_string(r.bins_compared));
}

void criterion3() {
  const auto t0 = Clock::now();
  const auto ep = make_complex_plan(kFig2);
  const auto cp = make_character_plan(kFig2, true);
  const auto up = make_character_plan(kFig2, false);
  double sup = 0.0, dev = 0.0;
  for (double x = 1.0; x <= 100.0 + 1e-9; x += 0.1) {
    const double e = density_exact_c2(ep, x);
    sup = std::max(sup, std::abs(density_character(cp, x) - e));
    if (x <= 40.0 + 1e-9) dev = std::max(dev, std::abs(density_character(up, x) - e));
  }
  report(3, sup < 1e-6 && dev > 1e-3, since(t0), 60,
         "corrected sup on [1,100] = " + fmt("%.2e", sup) + ", uncorrected sup on [1,40] = " +
             fmt("%.3g", dev));
}

void criterion4() {
  const auto t0 = Clock::now();
  const auto ep = make_complex_plan(kFig2);
  const auto cp = make_character_plan(kFig2, true);
  std::vector<double> xs, ex, ch;
  for (int i = 0; i <= 2000; ++i) xs.push_back(270.0 + 10.0 * i / 2000);
  for (double x : xs) {
    ex.push_back(density_exact_c2(ep, x));
    ch.push_back(density_character(cp, x));
  }
  bool exact_ok = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ex[i] > 0.0)) exact_ok = false;
    if (i > 0 && ex[i] < ex[i - 1]) exact_ok = false;  // rising on this window
    if (i > 1) {
      const double curv = std::abs(ex[i] - 2 * ex[i - 1] + ex[i - 2]);
      if (curv > 1e-3 * ex[i - 1]) exact_ok = false;
    }
  }
  int sign_changes = 0, spikes = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && (ch[i] > 0) != (ch[i - 1] > 0)) ++sign_changes;
    if (std::abs(ch[i]) > 10 * std::abs(ex[i])) ++spikes;
    worst = std::max(worst, std::abs(ch[i] - ex[i]) / ex[i]);
  }
  const bool unstable = sign_changes + spikes >= 1;
  report(4, exact_ok && unstable, since(t0), 60,
         std::string("closed form smooth/positive/monotone: ") + (exact_ok ? "yes" : "no") +
             "; character in double: " + std::to_string(sign_changes) + " sign changes, " +
             std::to_string(spikes) + " spikes > 10x, max relative deviation " + fmt("%.2e", worst));
}

// Bin averages of the 4D-quadrature density by Gauss-Legendre inside each bin;
// the first bin uses x = t^2 against the x^(-1/2) edge.
DensityCurve binned_real(const EnsembleSpec& s, const std::vector<double>& edges, int nodes,
                         double& max_rel_err) {
  const GaussRule& g = gauss_legendre(nodes);
  struct Job {
    std::size_t bin;
    double x, w;
  };
  std::vector<Job> jobs;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const double lo = edges[b], hi = edges[b + 1];
    for (int k = 0; k < nodes; ++k) {
      if (b == 0 && lo == 0.0) {
        const double th = std::sqrt(hi), t = 0.5 * th * (g.nodes[k] + 1);
        jobs.push_back({b, t * t, 0.5 * th * g.weights[k] * 2 * t});
      } else {
        jobs.push_back({b, lo + 0.5 * (hi - lo) * (g.nodes[k] + 1), 0.5 * (hi - lo) * g.weights[k]});
      }
    }
  }
  std::vector<double> val(jobs.size()), err(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const RealQuadResult r = density_quad_r1(s, jobs[i].x);
    val[i] = r.value;
    err[i] = r.error / std::max(std::abs(r.value), 1e-300);
  });
  DensityCurve c;
  c.bin_edges = edges;
  c.values.assign(edges.size() - 1, 0.0);
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) c.grid.push_back(0.5 * (edges[b] + edges[b + 1]));
  max_rel_err = 0.0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    c.values[jobs[i].bin] += jobs[i].w * val[i];
    max_rel_err = std::max(max_rel_err, err[i]);
  }
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) c.values[b] /= edges[b + 1] - edges[b];
  return c;
}

DensityCurve g_real_binned;
std::vector<double> g_real_edges;

void criterion5() {
  const auto t0 = Clock::now();
  g_real_edges = uniform_edges(0.0, 60.0, 30);
  double rel = 0.0;
  g_real_binned = binned_real(kReal22, g_real_edges, 5, rel);
  McConfig mc{kReal22, 200000, 5};
  const DensityCurve hist = histogram_density(sample_wishart(mc), g_real_edges);
  const ComparisonReport r = compare_densities(hist, g_real_binned);
  bool eps_ok = true;
  double worst_ratio = 0.0;
  for (double x : {0.5, 3.0, 10.0}) {
    RealQuadConfig a, b;
    b.eps = a.eps / 2;
    const RealQuadResult ra = density_quad_r1(kReal22, x, a);
    const RealQuadResult rb = density_quad_r1(kReal22, x, b);
    const double ratio = std::abs(ra.value - rb.value) / ra.error;
    worst_ratio = std::max(worst_ratio, ratio);
    if (!(ratio < 1.0)) eps_ok = false;
  }
  report(5, r.l1 < 0.05 && eps_ok, since(t0), 1800,
         "L1(quad, MC) = " + fmt("%.4f", r.l1) + ", max |S(eps)-S(eps/2)| / error = " +
             fmt("%.3f", worst_ratio) + ", max point error estimate " + fmt("%.1e", rel));
}

void criterion6() {
  const auto t0 = Clock::now();
  const DegeneratePairSpec pairs{{1.5}, {0.8}};
  const EnsembleSpec full = expand_pairs(pairs);
  RealTerms t1;
  t1.t2 = t1.t3 = false;
  double worst = 0.0;
  for (double x : {0.2, 0.8, 2.0, 4.5, 9.0}) {
    const double red = reduced_s11_degenerate(pairs, x).value;
    const double quad = density_quad_r1(full, x, {}, t1).value;
    worst = std::max(worst, std::abs(red - quad) / std::abs(quad));
  }
  report(6, worst < 1e-3, since(t0), 900,
         "max relative |reduced - 4D S11| over 5 points = " + fmt("%.2e", worst));
}

void criterion7() {
  const auto t0 = Clock::now();
  const int p = 100, n = 400;
  const auto [lo, hi] = marchenko_pastur_support(p, n, 1.0, 1.0);
  const bool support_ok = std::abs(lo - 100.0) < 1e-6 && std::abs(hi - 900.0) < 1e-6;
  auto mp = [&](double x) { return marchenko_pastur(x, p, n, 1.0, 1.0); };
  const double mass = integrate(mp, lo, hi, 1e-13, 1e-12).value;
  DensityCurve curve;
  curve.grid = linear_grid(50.0, 950.0, 9001);
  for (double x : curve.grid) curve.values.push_back(mp(x));
  double l1[2];
  for (int beta : {1, 2}) {
    EnsembleSpec s{p, n, beta, std::vector<double>(p, 1.0), std::vector<double>(n, 1.0)};
    McConfig mc{s, 20000, 400};
    const DensityCurve hist = histogram_density(sample_wishart(mc), uniform_edges(50.0, 950.0, 90));
    l1[beta - 1] = compare_densities(curve, hist).l1;
  }
  report(7, support_ok && std::abs(mass - 1.0) < 1e-6 && l1[0] < 0.05 && l1[1] < 0.05, since(t0), 300,
         "L1 beta=1 " + fmt("%.4f", l1[0]) + ", beta=2 " + fmt("%.4f", l1[1]) + ", support [" +
             fmt("%.9g", lo) + ", " + fmt("%.9g", hi) + "], |mass-1| = " + fmt("%.1e", std::abs(mass - 1)));
}

double complex_moment(const EnsembleSpec& s, int k) {
  const auto plan = make_complex_plan(s);
  const double top = 4 * default_x_max(s);
  std::vector<double> pts;
  for (double x = 0.0; x < top; x += top / 64) pts.push_back(x);
  pts.push_back(top);
  auto f = [&](double x) { return std::pow(x, k) * density_exact_c2(plan, x); };
  return integrate(f, pts, 1e-13, 1e-11).value + integrate_to_inf(f, top, 1e-15, 1e-10).value;
}

double h_by_quadrature(double a, double b) {
  using C = std::complex<double>;
  const C I(0.0, 1.0);
  const double period = 2 * std::numbers::pi / std::abs(b);
  const int periods = static_cast<int>(std::ceil(400.0 / (std::abs(b) * period))) + 1;
  auto im_f = [&](double s) { return -(a * std::sin(b * s) + s * std::cos(b * s)) / (s * s + a * a); };
  double body = 0.0;
  for (int k = 0; k < periods; ++k) body += integrate(im_f, k * period, (k + 1) * period, 1e-15, 1e-14, 200).value;
  const double T = periods * period;
  C tail = 0.0, term = 1.0 / ((I * T - a) * (I * b));
  for (int k = 0; k < 60 && std::abs(term) > 1e-18 * std::abs(tail); ++k) {
    tail += term;
    term *= double(k + 1) * I / ((I * T - a) * (I * b));
  }
  return body + (-std::exp(I * (b * T)) * tail).imag();
}

void criterion8() {
  const auto t0 = Clock::now();
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char* name) {
    if (!ok) failed.push_back(name);
  };

  for (const EnsembleSpec& s : {kFig1, kFig2}) {
    check(std::abs(complex_moment(s, 0) - 1.0) < 1e-6, "complex normalization");
    const double m1 = sum(s.lambda) * sum(s.gamma) / s.p;
    check(std::abs(complex_moment(s, 1) - m1) < 1e-6 * m1, "complex first moment");
  }

  // Real quadrature mass from the binned curve of criterion 5 plus the tail beyond it.
  if (!g_real_binned.values.empty()) {
    double mass = 0.0;
    for (std::size_t b = 0; b < g_real_binned.values.size(); ++b)
      mass += g_real_binned.values[b] * (g_real_edges[b + 1] - g_real_edges[b]);
    const GaussRule& g = gauss_legendre(16);
    const double a = g_real_edges.back(), w = 60.0;
    for (int k = 0; k < 16; ++k)
      mass += 0.5 * w * g.weights[k] * density_quad_r1(kReal22, a + 0.5 * w * (g.nodes[k] + 1)).value;
    check(std::abs(mass - 1.0) < 0.02, "real normalization");
  }

  for (const EnsembleSpec& s : {kFig1, EnsembleSpec{kFig1.p, kFig1.n, 1, kFig1.lambda, kFig1.gamma}}) {
    const auto v = sample_wishart({s, 40000, 8});
    std::vector<double> tr(v.size() / s.p, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) tr[i / s.p] += v[i] / s.p;
    const double mean = sum(tr) / tr.size();
    double var = 0.0;
    for (double t : tr) var += (t - mean) * (t - mean);
    var /= tr.size() - 1;
    check(std::abs(mean - sum(s.lambda) * sum(s.gamma) / s.p) < 4 * std::sqrt(var / tr.size()),
          "Monte Carlo first moment");
  }

  {
    const auto base = make_complex_plan(kFig2);
    EnsembleSpec s = kFig2;
    std::mt19937_64 rng(1);
    std::shuffle(s.lambda.begin(), s.lambda.end(), rng);
    std::shuffle(s.gamma.begin(), s.gamma.end(), rng);
    const auto perm = make_complex_plan(s);
    EnsembleSpec t = kFig2;
    for (double& l : t.lambda) l *= 3.0;
    const auto scaled = make_complex_plan(t);
    for (double x : {1.0, 20.0, 150.0}) {
      const double ref = density_exact_c2(base, x);
      check(std::abs(density_exact_c2(perm, x) - ref) < 1e-10 * ref, "permutation invariance");
      check(std::abs(3.0 * density_exact_c2(scaled, 3.0 * x) - ref) < 1e-10 * ref, "scale covariance");
    }
    const std::vector<double> pr{1.0, 2.0, 0.5};
    const double real_ref = density_quad_r1({3, 2, 1, pr, {1, 3}}, 2.0).value;
    const double real_perm = density_quad_r1({3, 2, 1, {0.5, 1.0, 2.0}, {3, 1}}, 2.0).value;
    check(std::abs(real_perm - real_ref) < 1e-3 * real_ref, "real permutation invariance");
  }

  {
    const std::vector<double> v{0.3, 1.7, 2.2, 4.1, 0.9, 3.3};
    const auto full = elementary_symmetric_all(v);
    for (int j = 0; j < 6; ++j) {
      const auto ex = elementary_symmetric_all(v, {j});
      for (int k = 1; k <= 6; ++k) {
        const double rhs = (k < 6 ? ex[k] : 0.0) + v[j] * ex[k - 1];
        check(std::abs(full[k] - rhs) < 1e-13 * full[k], "symfunc exclusion identity");
      }
    }
  }

  {
    struct Ref {
      double x, j0, e1, ei, chi;
    };
    const Ref refs[] = {{0.1, 0.997501562066040032, 1.8229239584193906159, -1.6228128139692766136, -1.7228683861943336147},
                        {1, 0.76519768655796655145, 0.21938393439552027368, 1.8951178163559367555, 0.83786694098020824089},
                        {5, -0.17759677131433830435, 0.0011482955912753257973, 40.185275355803177455, 20.092063530105951065},
                        {20, 0.16702466434058315473, 9.8355252906498816904e-11, 25615652.66405658882, 12807826.332028294361}};
    for (const Ref& r : refs) {
      check(std::abs(bessel_j0(r.x) - r.j0) < 1e-12, "specfun J0");
      check(std::abs(expint_e1(r.x) - r.e1) < 1e-12 * r.e1, "specfun E1");
      check(std::abs(expint_ei(r.x) - r.ei) < 1e-12 * std::abs(r.ei), "specfun Ei");
      check(std::abs(chi(r.x) - r.chi) < 1e-12 * std::abs(r.chi), "specfun Chi");
    }
  }

  for (auto [a, b] : {std::pair{1.0, 0.5}, {0.3, 2.0}, {-0.7, 1.5}, {1.5, -0.4}}) {
    const double q = h_by_quadrature(a, b);
    check(std::abs(h_kernel(a, b).value - q) < 1e-10 * std::max(1.0, std::abs(q)), "h kernel vs quadrature");
  }

  std::string detail = failed.empty() ? "all property checks green" : "failed:";
  std::sort(failed.begin(), failed.end());
  failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
  for (const auto& f : failed) detail += " [" + f + "]";
  report(8, failed.empty(), since(t0), 600, detail);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", thread_count());
  const std::function<void()> runs[] = {criterion1, criterion2, criterion3, criterion4,
                                        criterion5, criterion6, criterion7, criterion8};
  for (int i = 0; i < 8; ++i) {
    try {
      runs[i]();
    } catch (const Error& e) {
      ++failures;
      std::printf("criterion %d FAIL  %s: %s\n", i + 1, error_name(e.code()), e.what());
    }
  }
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
