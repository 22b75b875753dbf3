#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace fraclab {

// Normalizing constant of the one-dimensional order-sigma kernel
// C_sigma |z|^{-(1+sigma)}, chosen so that the Fourier symbol of the
// pure-power operator is -|xi|^sigma.  Closed Gamma-function form:
//   C = sigma 2^{sigma-1} Gamma((1+sigma)/2) / (sqrt(pi) Gamma(1-sigma/2)).
double normalization_constant(double sigma);

// One admissible symmetric kernel K(z) = C_sigma kappa(z) |z|^{-(1+sigma)}
// with lambda_lo <= kappa(z) <= lambda_hi for all z != 0.
struct KernelSpec {
  double sigma = 1.0;
  double lambda_lo = 1.0;
  double lambda_hi = 1.0;
  // Multiplier profile kappa(z); empty means kappa == 1 (pure power kernel).
  std::function<double(double)> multiplier;
  // Optional continuity data: |kappa(z) - k| <= omega(|z|) for |z| <= 1.
  std::optional<double> limit_multiplier;
  std::function<double(double)> modulus;
  // Quadrature hint: kappa is piecewise smooth with breaks on dyadic shells.
  bool dyadic_multiplier = false;

  double kappa(double z) const { return multiplier ? multiplier(z) : 1.0; }
  bool pure() const { return !multiplier; }
};

KernelSpec make_frac_laplacian(double sigma);
// kappa == scale; band is [min(1,scale), max(1,scale)].  Used for extremal
// one-row families such as {lambda fracLap, Lambda fracLap}.
KernelSpec make_scaled_kernel(double sigma, double scale);
// Deterministic piecewise-constant multiplier on dyadic shells of (0,1],
// constant beyond |z| >= 1, everywhere inside [lambda, Lambda].
KernelSpec make_band_kernel(double sigma, double lambda, double Lambda, std::uint64_t seed);
// kappa(z) = k (1 + min(|z|,1)^omega_exponent / 2), band [k/2, 2k],
// limit multiplier k, modulus omega(t) = (k/2) t^omega_exponent.
KernelSpec make_perturbed_kernel(double sigma, double k, double omega_exponent);

// K(z) = C_sigma kappa(z) |z|^{-(1+sigma)}; z == 0 is a domain error.
double kernel_value(const KernelSpec& spec, double z);

struct EllipticityReport {
  bool pass = true;
  double worst_z = 0.0;
  double worst_kappa = 0.0;  // the offending multiplier value on failure
};
EllipticityReport check_ellipticity(const KernelSpec& spec, std::span<const double> samples);

struct ContinuityReport {
  bool pass = true;
  double worst_z = 0.0;
  double excess = 0.0;  // max over samples of |kappa - k| - omega(|z|)
};
ContinuityReport check_continuity_modulus(const KernelSpec& spec, std::span<const double> samples);

// Deterministic log-spaced sample set on (0, r_max], mirrored to negative z.
std::vector<double> default_kernel_samples(double r_max, int per_side = 48);

// Finite inf-sup family; entry (i,j) with i the inf index and j the sup index.
struct IsaacsOperator {
  int rows = 1;
  int cols = 1;
  std::vector<KernelSpec> kernels;  // row-major, rows*cols entries
  double sigma = 1.0;

  const KernelSpec& at(int i, int j) const {
    return kernels[static_cast<std::size_t>(i) * cols + j];
  }
};

// Validates the shared order and band; throws std::invalid_argument.
IsaacsOperator make_isaacs(std::vector<KernelSpec> kernels, int rows, int cols);

// Deterministic hashing used for seeded kernel families and test data.
std::uint64_t splitmix64(std::uint64_t& state);
double hash_unit(std::uint64_t seed, std::int64_t index);  // in [0,1)

}  // namespace fraclab
