#pragma once

#include <string>

#include "fraclab/grid.hpp"

namespace fraclab {

// Analytic test functions sampled on the grid, each with the matching
// exterior behavior on |x| > R.

GridFunction fx_zero(const Grid& g);
GridFunction fx_constant(const Grid& g, double c);
GridFunction fx_affine(const Grid& g, double a, double b);
GridFunction fx_cosine(const Grid& g);
GridFunction fx_gaussian(const Grid& g);
// |x|^beta with power-tag exterior
GridFunction fx_abs_power(const Grid& g, double beta);
// x+1 for x <= -1, 0 on (-1,1), x-1 for x >= 1
GridFunction fx_odd_kink(const Grid& g);
// c2 x^2 on [-splice, splice], tangent lines beyond (C^1, globally convex
// for c2 > 0, linear growth)
GridFunction fx_quadratic_splice(const Grid& g, double c2, double splice_radius);

// Comparison-failure pair: v = smoothstep profile of |x| (0 on [0,1], 1
// beyond 2) and u = v + eta with eta a small C^2 bump at the origin, so
// u = v outside B_1 but u(0) > v(0).
struct ComparisonPair {
  GridFunction v;
  GridFunction u;
  double bump_amp = 0.0;
  double bump_width = 0.0;
};
ComparisonPair fx_comparison_pair(const Grid& g, double bump_amp = 1e-4, double bump_width = 0.3);

// Named function specs used by the CLI: zero | one | const:V | cos |
// gaussian | abspow:B | kink | quadratic:C2,RADIUS | affine:A,B
GridFunction fx_named(const std::string& name, const Grid& g);

}  // namespace fraclab
