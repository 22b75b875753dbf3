#pragma once

#include <vector>

#include "fraclab/nonlocal_ops.hpp"

namespace fraclab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};
LineFit least_squares_line(const std::vector<double>& xs, const std::vector<double>& ys);

struct RegularityReport {
  double fitted_exponent = 0.0;
  double seminorm_at_fit = 0.0;
  std::vector<std::pair<double, double>> scale_table;  // (r, oscillation)
  double regression_residual = 0.0;
};

// Least-squares slope of log oscillation(B_r(center)) against log r over the
// supplied decreasing scales.
RegularityReport fit_holder_exponent(const GridFunction& u, double center,
                                     const std::vector<double>& scales);

struct FlatnessEntry {
  int k = 0;
  double r = 0.0;
  double a = 0.0;
  double p = 0.0;
  double dev = 0.0;
};
struct FlatnessTrace {
  double rho = 0.5;
  std::vector<FlatnessEntry> entries;
  double slope = 0.0;  // log dev_k against log rho^k; NaN when some dev_k = 0
  bool pass_decay = true;
  bool pass_coefficients = true;
  bool pass = true;
};

// Best affine fits on the geometric balls B_{rho^k}(center), k = 0..K-1.
// Decay passes when dev_k <= dev_0 rho^{k(1+alpha)}; coefficient increments
// must obey |a_{k+1}-a_k| <= C rho^{(1+alpha)k} and |p_{k+1}-p_k| <= C rho^{alpha k}.
FlatnessTrace flatness_trace(const GridFunction& u, double center, double rho, int K,
                             double C_bound, double alpha);

enum class Side { left, right };
struct BlowupProfile {
  std::vector<std::pair<double, double>> table;  // (distance to boundary, value)
  double slope = 0.0;            // log|value| against log distance, plain OLS
  double increment_slope = 0.0;  // log|v_i - v_{i+1}| against the geometric
                                 // mean distance: the divergence-rate
                                 // estimator, insensitive to the bounded
                                 // far-field contribution
};

// Linear-operator values at nodes approaching x = +1 (right) or x = -1
// (left) from inside; distances are snapped to the grid.
BlowupProfile blowup_profile(const GridFunction& u, const KernelSpec& spec, Side side,
                             const std::vector<double>& distances,
                             const QuadratureScheme& q = {});

}  // namespace fraclab
