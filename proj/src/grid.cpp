#include "fraclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fraclab/quadrature.hpp"

namespace fraclab {

Grid Grid::make(double R, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("Grid: h must be positive");
  if (!(R >= 2.0)) throw std::invalid_argument("Grid: R must be at least 2");
  double ratio = R / h;
  long n = std::lround(ratio);
  if (std::fabs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
    throw std::invalid_argument("Grid: R/h must be an integer");
  Grid g;
  g.R = R;
  g.h = h;
  g.n_side = static_cast<int>(n);
  return g;
}

int Grid::index_of(double x) const {
  long i = std::lround(x / h) + n_side;
  return static_cast<int>(std::clamp(i, 0L, static_cast<long>(2 * n_side)));
}

ExteriorExtension ExteriorExtension::zero() { return {}; }

ExteriorExtension ExteriorExtension::constant(double c) {
  ExteriorExtension e;
  e.tag = Tag::constant;
  e.a = c;
  return e;
}

ExteriorExtension ExteriorExtension::affine(double a, double b) {
  ExteriorExtension e;
  e.tag = Tag::affine;
  e.a = a;
  e.b = b;
  return e;
}

ExteriorExtension ExteriorExtension::power(double s, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("ExteriorExtension: power beta must be >= 0");
  ExteriorExtension e;
  e.tag = Tag::power;
  e.a = s;
  e.b = beta;
  return e;
}

ExteriorExtension ExteriorExtension::callable(std::function<double(double)> f, double growth,
                                              bool oscillatory) {
  ExteriorExtension e;
  e.tag = Tag::callable;
  e.fn = std::move(f);
  e.callable_growth = growth;
  e.oscillatory = oscillatory;
  return e;
}

double ExteriorExtension::operator()(double x) const {
  switch (tag) {
    case Tag::zero:
      return 0.0;
    case Tag::constant:
      return a;
    case Tag::affine:
      return a + b * x;
    case Tag::power:
      return a * std::pow(std::fabs(x), b);
    case Tag::callable:
      return fn(x);
  }
  return 0.0;
}

double ExteriorExtension::growth_exponent() const {
  switch (tag) {
    case Tag::zero:
    case Tag::constant:
      return 0.0;
    case Tag::affine:
      return b != 0.0 ? 1.0 : 0.0;
    case Tag::power:
      return b;
    case Tag::callable:
      return callable_growth;
  }
  return 0.0;
}

GridFunction GridFunction::constant(const Grid& g, double c) {
  GridFunction u;
  u.grid = g;
  u.values.assign(static_cast<std::size_t>(g.size()), c);
  u.exterior = ExteriorExtension::constant(c);
  return u;
}

GridFunction GridFunction::from_callable(const Grid& g, const std::function<double(double)>& f,
                                         ExteriorExtension ext) {
  GridFunction u;
  u.grid = g;
  u.values.resize(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) u.values[static_cast<std::size_t>(i)] = f(g.node(i));
  u.exterior = std::move(ext);
  return u;
}

double GridFunction::lattice(long ic) const {
  long i = ic + grid.n_side;
  if (i >= 0 && i <= 2L * grid.n_side) return values[static_cast<std::size_t>(i)];
  return exterior(static_cast<double>(ic) * grid.h);
}

GridFunction scale(const GridFunction& u, double c) {
  GridFunction v = u;
  for (auto& x : v.values) x *= c;
  using Tag = ExteriorExtension::Tag;
  switch (v.exterior.tag) {
    case Tag::zero:
      break;
    case Tag::constant:
    case Tag::power:
      v.exterior.a *= c;
      break;
    case Tag::affine:
      v.exterior.a *= c;
      v.exterior.b *= c;
      break;
    case Tag::callable: {
      auto f = u.exterior.fn;
      v.exterior.fn = [f, c](double x) { return c * f(x); };
      break;
    }
  }
  return v;
}

NodeRange nodes_in_ball(const Grid& g, double center, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("nodes_in_ball: negative radius");
  const double snap = 1e-9 * g.h;
  long lo = static_cast<long>(std::ceil((center - r - snap) / g.h)) + g.n_side;
  long hi = static_cast<long>(std::floor((center + r + snap) / g.h)) + g.n_side;
  lo = std::max(lo, 0L);
  hi = std::min(hi, static_cast<long>(2 * g.n_side));
  NodeRange nr;
  if (lo > hi) return nr;
  nr.lo = static_cast<int>(lo);
  nr.hi = static_cast<int>(hi);
  return nr;
}

double tail_norm(const GridFunction& u, double sigma) {
  if (!(sigma > 0.0 && sigma < 2.0)) throw std::domain_error("tail_norm: sigma must lie in (0,2)");
  const double growth = u.exterior.growth_exponent();
  if (!(growth < sigma))
    throw std::domain_error("tail_norm: not in L1_sigma (exterior growth >= sigma)");
  const Grid& g = u.grid;
  auto w = [sigma](double y) { return std::pow(1.0 + std::fabs(y), -1.0 - sigma); };
  // trapezoid over [-R, R]
  double acc = 0.0;
  for (int i = 0; i <= 2 * g.n_side; ++i) {
    double v = std::fabs(u.at_node(i)) * w(g.node(i));
    acc += (i == 0 || i == 2 * g.n_side) ? 0.5 * v : v;
  }
  acc *= g.h;
  // exterior tails on both sides
  const auto& ext = u.exterior;
  acc += weighted_tail([&](double y) { return std::fabs(ext(y)) + std::fabs(ext(-y)); }, growth,
                       g.R, sigma, 1e-12);
  return acc;
}

double oscillation(const GridFunction& u, double center, double r) {
  NodeRange nr = nodes_in_ball(u.grid, center, r);
  if (nr.empty()) throw std::invalid_argument("oscillation: no grid nodes in the ball");
  double mn = u.at_node(nr.lo), mx = mn;
  for (int i = nr.lo + 1; i <= nr.hi; ++i) {
    double v = u.at_node(i);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return mx - mn;
}

double holder_seminorm(const GridFunction& u, double alpha, double center, double r) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("holder_seminorm: alpha must lie in (0,1]");
  NodeRange nr = nodes_in_ball(u.grid, center, r);
  if (nr.count() < 2) throw std::invalid_argument("holder_seminorm: fewer than two nodes in ball");
  double best = 0.0;
  for (int i = nr.lo; i <= nr.hi; ++i) {
    for (int j = i + 1; j <= nr.hi; ++j) {
      double d = std::fabs(u.at_node(i) - u.at_node(j));
      if (d == 0.0) continue;
      double q = d / std::pow((j - i) * u.grid.h, alpha);
      best = std::max(best, q);
    }
  }
  return best;
}

namespace {

// Upper and lower convex hulls of (xi, y); returns indices into the input.
void convex_hulls(const std::vector<double>& xi, const std::vector<double>& y,
                  std::vector<int>& upper, std::vector<int>& lower) {
  const int n = static_cast<int>(xi.size());
  auto cross = [&](int o, int a, int b) {
    return (xi[a] - xi[o]) * (y[b] - y[o]) - (y[a] - y[o]) * (xi[b] - xi[o]);
  };
  lower.clear();
  for (int i = 0; i < n; ++i) {
    while (lower.size() >= 2 &&
           cross(lower[lower.size() - 2], lower.back(), i) <= 0.0)
      lower.pop_back();
    lower.push_back(i);
  }
  upper.clear();
  for (int i = 0; i < n; ++i) {
    while (upper.size() >= 2 &&
           cross(upper[upper.size() - 2], upper.back(), i) >= 0.0)
      upper.pop_back();
    upper.push_back(i);
  }
}

}  // namespace

AffineFit best_affine_fit(const GridFunction& u, double center, double r) {
  NodeRange nr = nodes_in_ball(u.grid, center, r);
  if (nr.count() < 3) throw std::invalid_argument("best_affine_fit: degenerate ball (< 3 nodes)");
  const int n = nr.count();
  std::vector<double> xi(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    xi[static_cast<std::size_t>(k)] = u.grid.node(nr.lo + k) - center;
    y[static_cast<std::size_t>(k)] = u.at_node(nr.lo + k);
  }
  // The sup-norm width w(p) = max(y - p xi) - min(y - p xi) is convex and
  // piecewise linear in p with breakpoints at the hull edge slopes, so the
  // minimum is attained at one of those candidate slopes.
  std::vector<int> upper, lower;
  convex_hulls(xi, y, upper, lower);
  std::vector<double> cand;
  auto push_slopes = [&](const std::vector<int>& hull) {
    for (std::size_t k = 1; k < hull.size(); ++k) {
      int i = hull[k - 1], j = hull[k];
      cand.push_back((y[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(i)]) /
                     (xi[static_cast<std::size_t>(j)] - xi[static_cast<std::size_t>(i)]));
    }
  };
  push_slopes(upper);
  push_slopes(lower);
  if (cand.empty()) cand.push_back(0.0);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  AffineFit best;
  double best_w = -1.0;
  for (double p : cand) {
    double mx = y[0] - p * xi[0], mn = mx;
    for (int k = 1; k < n; ++k) {
      double v = y[static_cast<std::size_t>(k)] - p * xi[static_cast<std::size_t>(k)];
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
    double w = mx - mn;
    if (best_w < 0.0 || w < best_w) {
      best_w = w;
      best.p = p;
      best.a = 0.5 * (mx + mn);
      best.dev = 0.5 * w;
    }
  }
  return best;
}

}  // namespace fraclab
