#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fraclab/fixtures.hpp"
#include "fraclab/nonlocal_ops.hpp"

using namespace fraclab;

namespace {
GridFunction random_compact(const Grid& g, std::uint64_t seed) {
  GridFunction u = fx_zero(g);
  for (int i = 0; i < g.size(); ++i)
    if (std::fabs(g.node(i)) < 1.0) u.values[i] = 2.0 * hash_unit(seed, i) - 1.0;
  return u;
}
}  // namespace

TEST_CASE("eval_linear: constants and affine functions annihilate") {
  Grid g = Grid::make(4.0, 1.0 / 64);
  GridFunction c = fx_constant(g, 3.7);
  CHECK(eval_linear(c, make_frac_laplacian(1.5), g.index_of(0.0)) == 0.0);
  GridFunction aff = fx_affine(g, 0.5, 1.0);
  for (double x : {0.0, -1.5, 2.0}) {
    CHECK(std::fabs(eval_linear(aff, make_frac_laplacian(1.5), g.index_of(x))) <= 1e-10);
    CHECK(std::fabs(eval_linear(aff, make_band_kernel(1.5, 1.0, 2.0, 9), g.index_of(x))) <= 1e-10);
  }
}

TEST_CASE("eval_linear: cosine symbol at xi = 1") {
  Grid g = Grid::make(4.0, 1.0 / 128);
  GridFunction u = fx_cosine(g);
  for (double s : {0.5, 1.0, 1.5}) {
    double v = eval_linear(u, make_frac_laplacian(s), g.index_of(0.0));
    CHECK(v == doctest::Approx(-1.0).epsilon(1e-3));
  }
}

TEST_CASE("eval_linear: odd kink vanishes at the origin") {
  Grid g = Grid::make(4.0, 1.0 / 128);
  GridFunction u = fx_odd_kink(g);
  CHECK(std::fabs(eval_linear(u, make_frac_laplacian(1.5), g.index_of(0.0))) <= 1e-10);
}

TEST_CASE("eval_linear: errors") {
  Grid g = Grid::make(4.0, 1.0 / 64);
  GridFunction u = fx_zero(g);
  CHECK_THROWS_AS(eval_linear(u, make_frac_laplacian(1.5), g.index_of(3.5)), std::domain_error);
  GridFunction fat = fx_abs_power(g, 1.8);
  CHECK_THROWS_AS(eval_linear(fat, make_frac_laplacian(1.5), g.index_of(0.0)),
                  std::domain_error);
  // affine tails need sigma > 1
  GridFunction aff = fx_affine(g, 0.0, 1.0);
  CHECK_THROWS_AS(eval_linear(aff, make_frac_laplacian(0.5), g.index_of(0.0)), std::domain_error);
}

TEST_CASE("eval_linear: sigma near 2 approaches the second derivative") {
  Grid g = Grid::make(4.0, 1.0 / 512);
  GridFunction q = fx_gaussian(g);
  double v = eval_linear(q, make_frac_laplacian(1.99), g.index_of(0.0));
  CHECK(std::fabs(v - (-2.0)) <= 0.05 * 2.0);  // within 5% of q''(0)
}

TEST_CASE("eval_linear: linearity and translation covariance") {
  Grid g = Grid::make(4.0, 1.0 / 64);
  KernelSpec spec = make_band_kernel(1.5, 1.0, 2.0, 17);
  GridFunction u = random_compact(g, 41), v = random_compact(g, 42);
  GridFunction w = fx_zero(g);
  for (int i = 0; i < g.size(); ++i) w.values[i] = 2.0 * u.values[i] - 0.5 * v.values[i];
  int node = g.index_of(0.25);
  double lhs = eval_linear(w, spec, node);
  double rhs = 2.0 * eval_linear(u, spec, node) - 0.5 * eval_linear(v, spec, node);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

  // shift u and x together by 16 nodes
  GridFunction shifted = fx_zero(g);
  for (int i = 16; i < g.size(); ++i) shifted.values[i] = u.values[i - 16];
  double a = eval_linear(u, spec, g.index_of(0.0));
  double b = eval_linear(shifted, spec, g.index_of(16 * g.h));
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
}

TEST_CASE("eval_isaacs: reductions") {
  Grid g = Grid::make(4.0, 1.0 / 64);
  GridFunction u = random_compact(g, 51);
  int node = g.index_of(0.125);
  IsaacsOperator single = make_isaacs({make_frac_laplacian(1.5)}, 1, 1);
  CHECK(eval_isaacs(u, single, node) == eval_linear(u, make_frac_laplacian(1.5), node));

  // 1x2 sup family {lambda fracLap, Lambda fracLap}
  IsaacsOperator pair =
      make_isaacs({make_scaled_kernel(1.5, 0.5), make_scaled_kernel(1.5, 2.0)}, 1, 2);
  double lin = eval_linear(u, make_frac_laplacian(1.5), node);
  CHECK(eval_isaacs(u, pair, node) == doctest::Approx(std::max(0.5 * lin, 2.0 * lin)).epsilon(1e-12));
}

TEST_CASE("pucci extremal: zeros, convex case, sandwich") {
  Grid g = Grid::make(4.0, 1.0 / 64);
  int node = g.index_of(0.0);
  GridFunction c = fx_constant(g, 2.0);
  CHECK(eval_pucci(c, node, ExtremalSign::plus, 1.5, 1.0, 2.0) == 0.0);
  CHECK(eval_pucci(c, node, ExtremalSign::minus, 1.5, 1.0, 2.0) == 0.0);

  // globally convex sample: one-signed differences collapse the extremal
  GridFunction conv = fx_quadratic_splice(g, 1.0, 1.5);
  double lin = eval_linear(conv, make_frac_laplacian(1.5), node);
  CHECK(eval_pucci(conv, node, ExtremalSign::plus, 1.5, 1.0, 2.0) ==
        doctest::Approx(2.0 * lin).epsilon(1e-12));
  CHECK(eval_pucci(conv, node, ExtremalSign::minus, 1.5, 1.0, 2.0) ==
        doctest::Approx(1.0 * lin).epsilon(1e-12));
}

TEST_CASE("pucci sandwich: brute-force sweep on 9-node and 17-node grids") {
  for (double h : {1.0, 0.5}) {
  Grid g = Grid::make(4.0, h);
  for (std::uint64_t useed = 1; useed <= 4; ++useed) {
    GridFunction u = fx_zero(g);
    for (int i = 0; i < g.size(); ++i) u.values[i] = 2.0 * hash_unit(600 + useed, i) - 1.0;
    for (std::uint64_t ks = 1; ks <= 100; ++ks) {
      KernelSpec spec = make_band_kernel(1.5, 1.0, 2.0, ks);
      for (int i = 0; i < g.size(); ++i) {
        if (!(std::fabs(g.node(i)) < g.R - 1.0 - 1e-12)) continue;
        double lin = eval_linear(u, spec, i);
        double lo = eval_pucci(u, i, ExtremalSign::minus, 1.5, 1.0, 2.0);
        double hi = eval_pucci(u, i, ExtremalSign::plus, 1.5, 1.0, 2.0);
        CHECK(lo <= lin + 1e-12);
        CHECK(lin <= hi + 1e-12);
      }
    }
  }
  }
}

TEST_CASE("isaacs values sit between the extremals") {
  Grid g = Grid::make(4.0, 1.0 / 32);
  GridFunction u = random_compact(g, 77);
  std::vector<KernelSpec> ks;
  for (std::uint64_t s = 0; s < 6; ++s) ks.push_back(make_band_kernel(1.2, 0.8, 1.7, 100 + s));
  IsaacsOperator op = make_isaacs(ks, 2, 3);
  for (double x : {0.0, 0.5, -1.25}) {
    int node = g.index_of(x);
    double v = eval_isaacs(u, op, node);
    CHECK(eval_pucci(u, node, ExtremalSign::minus, 1.2, 0.8, 1.7) <= v + 1e-12);
    CHECK(v <= eval_pucci(u, node, ExtremalSign::plus, 1.2, 0.8, 1.7) + 1e-12);
  }
}

TEST_CASE("eval_I_delta: exact split for a quadratic and delta refinement") {
  Grid g = Grid::make(4.0, 1.0 / 128);
  IsaacsOperator op = make_isaacs({make_band_kernel(1.5, 1.0, 2.0, 7)}, 1, 1);
  GridFunction u = fx_quadratic_splice(g, 0.8, 1.5);
  int node = g.index_of(0.0);
  double ref = eval_isaacs(u, op, node);
  for (double delta : {0.05, 0.2, 0.5}) {
    QuadraticPoly phi{0.0, u.at_node(node), 0.0, 0.8};
    double v = eval_I_delta(u, phi, op, node, delta);
    CHECK(v == doctest::Approx(ref).epsilon(2e-3));
  }

  // smooth u, second-order test polynomial: the split converges as delta -> 0
  // (pure kernel: the band multiplier's shell jumps add node-sampling noise
  // of order 1e-3 that would mask the refinement)
  Grid gfine = Grid::make(4.0, 1.0 / 512);
  IsaacsOperator op2 = make_isaacs({make_frac_laplacian(1.5)}, 1, 1);
  GridFunction gsn = fx_gaussian(gfine);
  int n3 = gfine.index_of(0.3);
  double x3 = gfine.node(n3);
  auto gfn = [](double x) { return std::exp(-x * x); };
  double g2 = (gfn(x3 + 1e-4) + gfn(x3 - 1e-4) - 2 * gfn(x3)) / 1e-8;  // q'' oracle
  QuadraticPoly taylor{x3, gfn(x3), -2 * x3 * gfn(x3), 0.5 * g2};
  double iref = eval_isaacs(gsn, op2, n3);
  double prev = 1e300;
  for (double delta : {0.2, 0.1, 0.05}) {
    double err = std::fabs(eval_I_delta(gsn, taylor, op2, n3, delta) - iref);
    CHECK(err < prev);
    prev = err;
  }

  // gradient-free test polynomial still evaluates
  QuadraticPoly flat{0.0, u.at_node(node), 0.0, -1.0};
  CHECK(std::isfinite(eval_I_delta(u, flat, op, node, 0.1)));
  CHECK_THROWS_AS(eval_I_delta(u, flat, op, node, 1.5), std::invalid_argument);
}

TEST_CASE("eval_local_limit: literal inf-sup of k_ij D2") {
  Grid g = Grid::make(4.0, 1.0 / 64);
  GridFunction sq = GridFunction::from_callable(
      g, [](double x) { return x * x; }, ExteriorExtension::power(1.0, 2.0));
  std::vector<double> k = {1.0, 2.0, 3.0, 4.0};
  int node = g.index_of(0.5);
  // D2 = 2 exactly for x^2: inf_i sup_j k_ij * 2 = 2 min_i max_j = 2 * 2
  CHECK(eval_local_limit(sq, k, 2, 2, node) == doctest::Approx(4.0).epsilon(1e-12));
  GridFunction aff = fx_affine(g, 1.0, 2.0);
  CHECK(eval_local_limit(aff, k, 2, 2, node) == doctest::Approx(0.0));
  GridFunction nsq = scale(sq, -1.0);
  // literal evaluation: inf_i sup_j (k_ij * (-2)) = -2 max_i min_j = -6
  CHECK(eval_local_limit(nsq, k, 2, 2, node) == doctest::Approx(-6.0).epsilon(1e-12));
  CHECK_THROWS_AS(eval_local_limit(sq, k, 2, 2, 0), std::domain_error);
}

TEST_CASE("fractional p-laplacian") {
  Grid g = Grid::make(4.0, 1.0 / 64);
  int node = g.index_of(0.25);
  GridFunction c = fx_constant(g, 5.0);
  CHECK(eval_frac_p_laplacian(c, 1.5, 3.0, 0.0, node) == 0.0);
  // even function at its minimum: zero gradient estimate, zero jump
  GridFunction sq = fx_quadratic_splice(g, 1.0, 1.5);
  CHECK(eval_frac_p_laplacian(sq, 1.5, 3.0, 0.5, g.index_of(0.0)) == 0.0);
  GridFunction aff = fx_affine(g, 0.1, 1.0);
  CHECK(std::fabs(eval_frac_p_laplacian(aff, 1.5, 3.0, 0.0, node)) <= 1e-10);
  CHECK_THROWS_AS(eval_frac_p_laplacian(sq, 1.5, 2.0, 0.0, node), std::domain_error);
  CHECK_THROWS_AS(eval_frac_p_laplacian(sq, 1.5, 3.0, -1.0, node), std::domain_error);
}

TEST_CASE("sweeps: serial and parallel paths are byte identical") {
  Grid g = Grid::make(4.0, 1.0 / 32);
  GridFunction u = random_compact(g, 88);
  KernelSpec spec = make_band_kernel(1.3, 1.0, 2.0, 5);
  SweepResult a = eval_linear_sweep(u, spec, {}, Exec::serial);
  SweepResult b = eval_linear_sweep(u, spec, {}, Exec::parallel);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(a.values[i] == b.values[i]);
  }
}
