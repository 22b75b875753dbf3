#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fraclab/kernels.hpp"

using namespace fraclab;

TEST_CASE("normalization constant: closed form and domain") {
  // sigma = 1 gives the Cauchy kernel constant 1/pi
  CHECK(normalization_constant(1.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  CHECK_THROWS_AS(normalization_constant(0.0), std::domain_error);
  CHECK_THROWS_AS(normalization_constant(2.0), std::domain_error);
  CHECK_THROWS_AS(normalization_constant(-0.5), std::domain_error);
  CHECK_THROWS_AS(normalization_constant(2.5), std::domain_error);
}

TEST_CASE("normalization constant: positive and continuous on compacts") {
  double prev = normalization_constant(0.05);
  for (int k = 1; k <= 190; ++k) {
    double s = 0.05 + k * 0.01;
    double c = normalization_constant(s);
    CHECK(c > 0.0);
    CHECK(std::fabs(c - prev) < 0.05);  // sampled continuity
    prev = c;
  }
}

TEST_CASE("frac laplacian spec") {
  KernelSpec k = make_frac_laplacian(0.5);
  CHECK(k.kappa(0.3) == 1.0);
  KernelSpec k15 = make_frac_laplacian(1.5);
  for (double z : default_kernel_samples(4.0)) {
    CHECK(k15.kappa(z) == k15.kappa(-z));
  }
  auto samples = default_kernel_samples(4.0);
  CHECK(check_ellipticity(k15, samples).pass);
}

TEST_CASE("kernel_value: scaling, symmetry, singularity") {
  KernelSpec pure = make_frac_laplacian(0.7);
  double C = normalization_constant(0.7);
  for (double z : {0.3, -1.7, 0.004}) {
    CHECK(kernel_value(pure, z) ==
          doctest::Approx(C * std::pow(std::fabs(z), -1.7)).epsilon(1e-14));
  }
  KernelSpec scaled = make_scaled_kernel(0.7, 0.25);
  CHECK(kernel_value(scaled, 0.9) == doctest::Approx(0.25 * kernel_value(pure, 0.9)));
  CHECK(kernel_value(scaled, 0.9) == kernel_value(scaled, -0.9));
  CHECK_THROWS_AS(kernel_value(pure, 0.0), std::domain_error);
}

TEST_CASE("check_ellipticity: band containment and offender report") {
  KernelSpec k;
  k.sigma = 1.0;
  k.multiplier = [](double z) { return 1.0 + 0.5 * std::sin(1.0 / std::fabs(z)); };
  k.lambda_lo = 0.5;
  k.lambda_hi = 1.5;
  auto samples = default_kernel_samples(4.0);
  CHECK(check_ellipticity(k, samples).pass);

  k.lambda_lo = 0.9;
  auto rep = check_ellipticity(k, samples);
  CHECK(!rep.pass);
  CHECK(rep.worst_kappa < 0.9);
  CHECK(rep.worst_z != 0.0);

  CHECK_THROWS_AS(check_ellipticity(k, std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("check_continuity_modulus") {
  auto samples = default_kernel_samples(1.0);
  KernelSpec flat = make_frac_laplacian(1.2);
  flat.limit_multiplier = 1.0;
  flat.modulus = [](double) { return 0.0; };
  CHECK(check_continuity_modulus(flat, samples).pass);

  KernelSpec lin = flat;
  lin.multiplier = [](double z) { return 1.0 + std::fabs(z); };
  lin.lambda_hi = 2.0;
  lin.modulus = [](double t) { return t; };
  CHECK(check_continuity_modulus(lin, samples).pass);

  KernelSpec root = lin;
  root.multiplier = [](double z) { return 1.0 + std::sqrt(std::fabs(z)); };
  auto rep = check_continuity_modulus(root, samples);
  CHECK(!rep.pass);
  // sqrt(t) > t on (0,1); the excess sqrt(t) - t peaks at t = 1/4
  CHECK(rep.excess > 0.0);
  CHECK(std::fabs(rep.worst_z) < 1.0);

  KernelSpec bare = make_frac_laplacian(1.2);
  CHECK_THROWS_AS(check_continuity_modulus(bare, samples), std::invalid_argument);
}

TEST_CASE("band kernels: deterministic, symmetric, inside the band") {
  auto samples = default_kernel_samples(4.0);
  for (std::uint64_t seed : {1ull, 42ull, 999ull}) {
    KernelSpec a = make_band_kernel(1.5, 1.0, 2.0, seed);
    KernelSpec b = make_band_kernel(1.5, 1.0, 2.0, seed);
    for (double z : samples) {
      CHECK(a.kappa(z) == b.kappa(z));
      CHECK(a.kappa(z) == a.kappa(-z));
      CHECK(a.kappa(z) >= 1.0);
      CHECK(a.kappa(z) <= 2.0);
    }
  }
}

TEST_CASE("band kernels are pinched by the pure kernel pointwise") {
  auto samples = default_kernel_samples(4.0);
  KernelSpec pure = make_frac_laplacian(1.3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    KernelSpec k = make_band_kernel(1.3, 0.7, 1.9, seed);
    for (double z : samples) {
      double v = kernel_value(k, z), base = kernel_value(pure, z);
      CHECK(v >= 0.7 * base - 1e-12 * base);
      CHECK(v <= 1.9 * base + 1e-12 * base);
    }
  }
}

TEST_CASE("perturbed kernel carries valid continuity data") {
  KernelSpec k = make_perturbed_kernel(1.5, 1.2, 0.5);
  REQUIRE(k.limit_multiplier.has_value());
  CHECK(*k.limit_multiplier == 1.2);
  auto samples = default_kernel_samples(1.0);
  CHECK(check_continuity_modulus(k, samples).pass);
  CHECK(check_ellipticity(k, default_kernel_samples(4.0)).pass);
}

TEST_CASE("isaacs operator invariants") {
  std::vector<KernelSpec> ks = {make_frac_laplacian(1.5), make_frac_laplacian(1.5)};
  CHECK_NOTHROW(make_isaacs(ks, 1, 2));
  CHECK_THROWS_AS(make_isaacs(ks, 2, 2), std::invalid_argument);
  std::vector<KernelSpec> mixed = {make_frac_laplacian(1.5), make_frac_laplacian(1.2)};
  CHECK_THROWS_AS(make_isaacs(mixed, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_isaacs({}, 0, 0), std::invalid_argument);
}
