#include "fraclab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fraclab {

LineFit least_squares_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("least_squares_line: need at least two points");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("least_squares_line: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += e * e;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

RegularityReport fit_holder_exponent(const GridFunction& u, double center,
                                     const std::vector<double>& scales) {
  if (scales.size() < 3) throw std::invalid_argument("fit_holder_exponent: need >= 3 scales");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] < scales[i - 1]))
      throw std::invalid_argument("fit_holder_exponent: scales must be strictly decreasing");
  if (!(scales.back() >= 4.0 * u.grid.h))
    throw std::invalid_argument("fit_holder_exponent: smallest scale under-resolved (< 4h)");
  RegularityReport rep;
  std::vector<double> lx, ly;
  for (double r : scales) {
    double osc = oscillation(u, center, r);
    rep.scale_table.emplace_back(r, osc);
    if (!(osc > 0.0))
      throw std::invalid_argument("fit_holder_exponent: zero oscillation at a scale");
    lx.push_back(std::log(r));
    ly.push_back(std::log(osc));
  }
  LineFit fit = least_squares_line(lx, ly);
  rep.fitted_exponent = fit.slope;
  rep.regression_residual = fit.rms_residual;
  double alpha = std::clamp(fit.slope, 1e-6, 1.0);
  rep.seminorm_at_fit = holder_seminorm(u, alpha, center, scales.front());
  return rep;
}

FlatnessTrace flatness_trace(const GridFunction& u, double center, double rho, int K,
                             double C_bound, double alpha) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("flatness_trace: rho not in (0,1)");
  if (K < 2) throw std::invalid_argument("flatness_trace: need depth >= 2");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("flatness_trace: alpha must lie in (0,1]");
  int feasible = 0;
  for (int k = 0; k < K; ++k) {
    double r = std::pow(rho, k);
    if (nodes_in_ball(u.grid, center, r).count() >= 4) feasible = k + 1;
  }
  if (feasible < K)
    throw std::invalid_argument("flatness_trace: depth under-resolved, max feasible K = " +
                                std::to_string(feasible));
  FlatnessTrace tr;
  tr.rho = rho;
  for (int k = 0; k < K; ++k) {
    double r = std::pow(rho, k);
    AffineFit fit = best_affine_fit(u, center, r);
    tr.entries.push_back({k, r, fit.a, fit.p, fit.dev});
  }
  const double dev0 = tr.entries.front().dev;
  for (int k = 0; k < K; ++k) {
    if (tr.entries[static_cast<std::size_t>(k)].dev >
        dev0 * std::pow(rho, k * (1.0 + alpha)) + 1e-14)
      tr.pass_decay = false;
  }
  for (int k = 0; k + 1 < K; ++k) {
    double da = std::fabs(tr.entries[static_cast<std::size_t>(k) + 1].a -
                          tr.entries[static_cast<std::size_t>(k)].a);
    double dp = std::fabs(tr.entries[static_cast<std::size_t>(k) + 1].p -
                          tr.entries[static_cast<std::size_t>(k)].p);
    if (da > C_bound * std::pow(rho, (1.0 + alpha) * k) + 1e-14) tr.pass_coefficients = false;
    if (dp > C_bound * std::pow(rho, alpha * k) + 1e-14) tr.pass_coefficients = false;
  }
  bool all_positive = true;
  for (const auto& e : tr.entries) all_positive = all_positive && e.dev > 0.0;
  if (all_positive) {
    std::vector<double> lx, ly;
    for (const auto& e : tr.entries) {
      lx.push_back(std::log(e.r));
      ly.push_back(std::log(e.dev));
    }
    tr.slope = least_squares_line(lx, ly).slope;
  } else {
    tr.slope = std::numeric_limits<double>::quiet_NaN();
  }
  tr.pass = tr.pass_decay && tr.pass_coefficients;
  return tr;
}

BlowupProfile blowup_profile(const GridFunction& u, const KernelSpec& spec, Side side,
                             const std::vector<double>& distances, const QuadratureScheme& q) {
  if (!(spec.sigma > 1.0 && spec.sigma < 2.0))
    throw std::invalid_argument("blowup_profile: sigma must lie in (1,2)");
  if (distances.empty()) throw std::invalid_argument("blowup_profile: no approach points");
  // The kink of the profile sits within the approach distance of the
  // evaluation point, so the inner cutoff must stay below that distance:
  // fall back to the lattice spacing unless the caller fixed it.
  QuadratureScheme qfine = q;
  if (qfine.delta_inner == 0.0) qfine.delta_inner = u.grid.h;
  BlowupProfile prof;
  std::vector<double> lx, ly;
  for (double d : distances) {
    double x = side == Side::right ? 1.0 - d : -1.0 + d;
    if (!(x > -1.0 && x < 1.0))
      throw std::invalid_argument("blowup_profile: approach point outside (-1,1)");
    int node = u.grid.index_of(x);
    double dist = 1.0 - std::fabs(u.grid.node(node));
    if (!(dist > 0.0))
      throw std::invalid_argument("blowup_profile: approach point snapped onto the boundary");
    double v = eval_linear(u, spec, node, qfine);
    prof.table.emplace_back(dist, v);
    lx.push_back(std::log(dist));
    ly.push_back(std::log(std::fabs(v)));
  }
  prof.slope = least_squares_line(lx, ly).slope;
  if (prof.table.size() >= 3) {
    std::vector<double> ix, iy;
    for (std::size_t i = 0; i + 1 < prof.table.size(); ++i) {
      double dv = std::fabs(prof.table[i].second - prof.table[i + 1].second);
      if (dv == 0.0) continue;
      ix.push_back(0.5 * (std::log(prof.table[i].first) + std::log(prof.table[i + 1].first)));
      iy.push_back(std::log(dv));
    }
    prof.increment_slope = ix.size() >= 2 ? least_squares_line(ix, iy).slope : prof.slope;
  } else {
    prof.increment_slope = prof.slope;
  }
  return prof;
}

}  // namespace fraclab
