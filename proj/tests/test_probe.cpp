#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fraclab/fixtures.hpp"
#include "fraclab/probe.hpp"

using namespace fraclab;

TEST_CASE("least squares line") {
  LineFit f = least_squares_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.rms_residual == doctest::Approx(0.0));
  CHECK_THROWS_AS(least_squares_line({1}, {1}), std::invalid_argument);
}

TEST_CASE("holder exponent fits") {
  Grid g = Grid::make(4.0, 1.0 / 512);
  std::vector<double> scales = {0.4, 0.2, 0.1, 0.05};
  RegularityReport half = fit_holder_exponent(fx_abs_power(g, 0.5), 0.0, scales);
  CHECK(half.fitted_exponent == doctest::Approx(0.5).epsilon(0.05 / 0.5));
  RegularityReport lin = fit_holder_exponent(fx_affine(g, 2.0, -1.0), 0.0, scales);
  CHECK(lin.fitted_exponent == doctest::Approx(1.0).epsilon(0.05));
  CHECK(lin.regression_residual <= 0.05);
  CHECK(half.scale_table.size() == 4);

  CHECK_THROWS_AS(fit_holder_exponent(fx_abs_power(g, 0.5), 0.0, {0.4, 0.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_holder_exponent(fx_abs_power(g, 0.5), 0.0, {0.4, 0.2, 0.1, 2 * g.h}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_holder_exponent(fx_abs_power(g, 0.5), 0.0, {0.1, 0.2, 0.4}),
                  std::invalid_argument);
}

TEST_CASE("holder exponent is scale and shift free") {
  Grid g = Grid::make(4.0, 1.0 / 256);
  std::vector<double> scales = {0.4, 0.2, 0.1, 0.05};
  GridFunction u = fx_abs_power(g, 0.5);
  double base = fit_holder_exponent(u, 0.0, scales).fitted_exponent;
  GridFunction v = scale(u, 2.5);
  for (auto& x : v.values) x += 7.0;
  v.exterior = ExteriorExtension::callable(
      [](double y) { return 2.5 * std::sqrt(std::fabs(y)) + 7.0; }, 0.5);
  double moved = fit_holder_exponent(v, 0.0, scales).fitted_exponent;
  CHECK(moved == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("flatness trace: affine, parabola, power profile") {
  Grid g = Grid::make(4.0, 1.0 / 512);
  FlatnessTrace aff = flatness_trace(fx_affine(g, 1.0, 2.0), 0.0, 0.5, 5, 0.0, 0.4);
  CHECK(aff.pass);
  for (const auto& e : aff.entries) CHECK(e.dev <= 1e-12);

  GridFunction sq = GridFunction::from_callable(
      g, [](double x) { return x * x; }, ExteriorExtension::power(1.0, 2.0));
  FlatnessTrace fsq = flatness_trace(sq, 0.0, 0.5, 6, 1.0, 1.0);
  CHECK(fsq.pass);
  CHECK(fsq.slope == doctest::Approx(2.0).epsilon(0.02));
  for (int k = 0; k + 1 < 6; ++k) {
    CHECK(std::fabs(fsq.entries[k + 1].p - fsq.entries[k].p) <= 1e-9);
    // dev_k = rho^{2k} / 2 for the unit parabola
    CHECK(fsq.entries[k].dev == doctest::Approx(0.5 * std::pow(0.25, k)).epsilon(0.02));
  }

  const double beta = (1.8 - 1.0) / (1.0 + 1.0);
  FlatnessTrace pw = flatness_trace(fx_abs_power(g, 1.0 + beta), 0.0, 0.5, 6, 10.0, beta);
  CHECK(pw.slope == doctest::Approx(1.0 + beta).epsilon(0.05 / 1.4));

  CHECK_THROWS_WITH_AS(flatness_trace(sq, 0.0, 0.5, 12, 1.0, 1.0) /* too deep */,
                       doctest::Contains("max feasible K"), std::invalid_argument);
}

TEST_CASE("flatness trace is invariant under affine additions") {
  Grid g = Grid::make(4.0, 1.0 / 256);
  GridFunction u = fx_abs_power(g, 1.4);
  FlatnessTrace base = flatness_trace(u, 0.0, 0.5, 5, 10.0, 0.4);
  GridFunction v = u;
  for (int i = 0; i < g.size(); ++i) v.values[i] += -0.3 + 0.9 * g.node(i);
  FlatnessTrace moved = flatness_trace(v, 0.0, 0.5, 5, 10.0, 0.4);
  for (int k = 0; k < 5; ++k)
    CHECK(moved.entries[k].dev == doctest::Approx(base.entries[k].dev).epsilon(1e-10));
}

TEST_CASE("flatness exponent of the explicit profile family is monotone in gamma") {
  Grid g = Grid::make(4.0, 1.0 / 256);
  const double sigma = 1.8;
  double prev = 10.0;
  for (double gamma : {0.5, 1.0, 2.0}) {
    double beta = (sigma - 1.0) / (1.0 + gamma);
    FlatnessTrace tr = flatness_trace(fx_abs_power(g, 1.0 + beta), 0.0, 0.5, 5, 10.0, 0.3);
    CHECK(tr.slope < prev);
    prev = tr.slope;
  }
}

TEST_CASE("blow-up profile of the odd kink") {
  Grid g = Grid::make(4.0, 1.0 / 512);
  GridFunction kink = fx_odd_kink(g);
  KernelSpec spec = make_frac_laplacian(1.5);
  std::vector<double> dists = {0.2, 0.1, 0.05, 0.025};
  BlowupProfile right = blowup_profile(kink, spec, Side::right, dists);
  BlowupProfile left = blowup_profile(kink, spec, Side::left, dists);

  for (std::size_t i = 0; i < right.table.size(); ++i) {
    CHECK(right.table[i].second > 0.0);
    CHECK(left.table[i].second < 0.0);
    if (i > 0) CHECK(right.table[i].second > right.table[i - 1].second);
  }
  // divergence rate from increments: -(sigma - 1)
  CHECK(right.increment_slope == doctest::Approx(-0.5).epsilon(0.1 / 0.5));
  CHECK(std::fabs(left.increment_slope - right.increment_slope) <= 1e-6);
  CHECK(std::fabs(left.slope - right.slope) <= 1e-6);

  // plain OLS slope against the closed form
  //   v(d) = C [d^{1-s} - (2-d)^{1-s}] / (s(s-1)):
  // the bounded far-kink part steepens the raw fit to about -0.636
  std::vector<double> lx, ly;
  double C = normalization_constant(1.5);
  for (auto& [d, v] : right.table) {
    lx.push_back(std::log(d));
    ly.push_back(std::log(C / (1.5 * 0.5) * (std::pow(d, -0.5) - std::pow(2.0 - d, -0.5))));
    CHECK(v == doctest::Approx(std::exp(ly.back())).epsilon(1e-3));
  }
  double oracle_slope = least_squares_line(lx, ly).slope;
  CHECK(right.slope == doctest::Approx(oracle_slope).epsilon(1e-3));
  CHECK(oracle_slope == doctest::Approx(-0.6363).epsilon(1e-2));
}

TEST_CASE("blow-up profile: smooth input has no divergence") {
  Grid g = Grid::make(4.0, 1.0 / 256);
  BlowupProfile prof =
      blowup_profile(fx_gaussian(g), make_frac_laplacian(1.5), Side::right, {0.2, 0.1, 0.05});
  // values stay bounded and the increment estimator shows no negative
  // divergence rate (the raw log-log slope is meaningless here because the
  // smooth values pass through a sign change near the boundary)
  CHECK(prof.increment_slope > -0.25);
  for (auto& [d, v] : prof.table) CHECK(std::fabs(v) <= 10.0);
}

TEST_CASE("blow-up profile: argument validation") {
  Grid g = Grid::make(4.0, 1.0 / 128);
  GridFunction kink = fx_odd_kink(g);
  CHECK_THROWS_AS(blowup_profile(kink, make_frac_laplacian(0.7), Side::right, {0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(blowup_profile(kink, make_frac_laplacian(1.5), Side::right, {1.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(blowup_profile(kink, make_frac_laplacian(1.5), Side::right, {}),
                  std::invalid_argument);
}
