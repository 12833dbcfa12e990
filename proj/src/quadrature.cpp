#include "wishart/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

namespace wishart {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p1 = x, p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(r)).first->second;
}

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * wgk[7], rg = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = h * xgk[j];
    const double s = f(c - x) + f(c + x);
    rk += wgk[j] * s;
    if (j % 2 == 1) rg += wg[j / 2] * s;
  }
  Segment s{a, b, rk * h, std::abs((rk - rg) * h)};
  return s;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, std::vector<double> points,
                     double abs_tol, double rel_tol, int max_intervals) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::priority_queue<Segment> heap;
  QuadResult res;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    Segment s = gk15(f, points[i - 1], points[i]);
    res.evaluations += 15;
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      res.converged = false;
      break;
    }
    Segment s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b)) {
      res.converged = false;
      heap.push(s);
      break;
    }
    Segment l = gk15(f, s.a, m), r = gk15(f, m, s.b);
    res.evaluations += 30;
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum to shed drift from the incremental updates.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = total;
  res.error = err;
  return res;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, int max_intervals) {
  return integrate(f, std::vector<double>{a, b}, abs_tol, rel_tol, max_intervals);
}

QuadResult integrate_to_inf(const std::function<double(double)>& f, double a, double abs_tol,
                            double rel_tol, int max_intervals) {
  auto g = [&](double t) {
    const double u = 1.0 - t;
    const double x = a + t / u;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v / (u * u);
  };
  return integrate(g, 0.0, 1.0, abs_tol, rel_tol, max_intervals);
}

}  // namespace wishart
