#include "fraclab/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fraclab {

double normalization_constant(double sigma) {
  if (!(sigma > 0.0 && sigma < 2.0))
    throw std::domain_error("normalization_constant: sigma must lie in (0,2)");
  return sigma * std::pow(2.0, sigma - 1.0) * std::tgamma(0.5 * (1.0 + sigma)) /
         (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - 0.5 * sigma));
}

KernelSpec make_frac_laplacian(double sigma) {
  if (!(sigma > 0.0 && sigma < 2.0))
    throw std::domain_error("make_frac_laplacian: sigma must lie in (0,2)");
  KernelSpec spec;
  spec.sigma = sigma;
  spec.lambda_lo = 1.0;
  spec.lambda_hi = 1.0;
  return spec;
}

KernelSpec make_scaled_kernel(double sigma, double scale) {
  if (!(scale > 0.0)) throw std::domain_error("make_scaled_kernel: scale must be positive");
  KernelSpec spec = make_frac_laplacian(sigma);
  spec.multiplier = [scale](double) { return scale; };
  spec.lambda_lo = std::min(1.0, scale);
  spec.lambda_hi = std::max(1.0, scale);
  return spec;
}

KernelSpec make_band_kernel(double sigma, double lambda, double Lambda, std::uint64_t seed) {
  if (!(sigma > 0.0 && sigma < 2.0))
    throw std::domain_error("make_band_kernel: sigma must lie in (0,2)");
  if (!(lambda > 0.0 && lambda <= Lambda))
    throw std::invalid_argument("make_band_kernel: need 0 < lambda <= Lambda");
  KernelSpec spec;
  spec.sigma = sigma;
  spec.lambda_lo = lambda;
  spec.lambda_hi = Lambda;
  spec.dyadic_multiplier = true;
  spec.multiplier = [lambda, Lambda, seed](double z) {
    double az = std::fabs(z);
    // shell m covers |z| in [2^{-m-1}, 2^{-m}); index -1 is everything >= 1
    std::int64_t shell = az >= 1.0 ? -1 : static_cast<std::int64_t>(std::floor(-std::log2(az)));
    return lambda + (Lambda - lambda) * hash_unit(seed, shell);
  };
  return spec;
}

KernelSpec make_perturbed_kernel(double sigma, double k, double omega_exponent) {
  if (!(k > 0.0)) throw std::invalid_argument("make_perturbed_kernel: k must be positive");
  if (!(omega_exponent > 0.0))
    throw std::invalid_argument("make_perturbed_kernel: omega exponent must be positive");
  KernelSpec spec;
  spec.sigma = sigma;
  spec.lambda_lo = 0.5 * k;
  spec.lambda_hi = 2.0 * k;
  spec.limit_multiplier = k;
  spec.multiplier = [k, omega_exponent](double z) {
    double t = std::min(std::fabs(z), 1.0);
    return k * (1.0 + 0.5 * std::pow(t, omega_exponent));
  };
  spec.modulus = [k, omega_exponent](double t) { return 0.5 * k * std::pow(t, omega_exponent); };
  if (!(sigma > 0.0 && sigma < 2.0))
    throw std::domain_error("make_perturbed_kernel: sigma must lie in (0,2)");
  return spec;
}

double kernel_value(const KernelSpec& spec, double z) {
  if (z == 0.0) throw std::domain_error("kernel_value: z = 0 (non-integrable singularity)");
  return normalization_constant(spec.sigma) * spec.kappa(z) *
         std::pow(std::fabs(z), -(1.0 + spec.sigma));
}

EllipticityReport check_ellipticity(const KernelSpec& spec, std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("check_ellipticity: empty sample set");
  EllipticityReport rep;
  double worst = 0.0;
  for (double z : samples) {
    if (z == 0.0) throw std::invalid_argument("check_ellipticity: sample z = 0");
    double k = spec.kappa(z);
    double violation = std::max(spec.lambda_lo - k, k - spec.lambda_hi);
    if (violation > worst) {
      worst = violation;
      rep.worst_z = z;
      rep.worst_kappa = k;
      rep.pass = false;
    }
  }
  return rep;
}

ContinuityReport check_continuity_modulus(const KernelSpec& spec, std::span<const double> samples) {
  if (!spec.limit_multiplier || !spec.modulus)
    throw std::invalid_argument("check_continuity_modulus: kernel has no continuity data");
  ContinuityReport rep;
  rep.excess = -1.0;
  bool any = false;
  for (double z : samples) {
    double az = std::fabs(z);
    if (az == 0.0 || az > 1.0) continue;
    any = true;
    double excess = std::fabs(spec.kappa(z) - *spec.limit_multiplier) - spec.modulus(az);
    if (excess > rep.excess) {
      rep.excess = excess;
      rep.worst_z = z;
    }
  }
  if (!any) throw std::invalid_argument("check_continuity_modulus: no samples in (0,1]");
  // roundoff slack: profiles sitting exactly on the modulus must pass
  rep.pass = rep.excess <= 1e-12 * (std::fabs(*spec.limit_multiplier) + 1.0);
  return rep;
}

std::vector<double> default_kernel_samples(double r_max, int per_side) {
  if (!(r_max > 0.0) || per_side < 2)
    throw std::invalid_argument("default_kernel_samples: bad arguments");
  std::vector<double> out;
  out.reserve(2 * static_cast<std::size_t>(per_side));
  const double decades = 6.0;  // down to r_max * 1e-6
  for (int j = 0; j < per_side; ++j) {
    double z = r_max * std::pow(10.0, -decades * j / (per_side - 1));
    out.push_back(z);
    out.push_back(-z);
  }
  return out;
}

IsaacsOperator make_isaacs(std::vector<KernelSpec> kernels, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("make_isaacs: need rows, cols >= 1");
  if (kernels.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("make_isaacs: kernel count does not match rows*cols");
  const double sigma = kernels.front().sigma;
  for (const auto& k : kernels) {
    if (k.sigma != sigma)
      throw std::invalid_argument("make_isaacs: all kernels must share the same order sigma");
  }
  IsaacsOperator op;
  op.rows = rows;
  op.cols = cols;
  op.sigma = sigma;
  op.kernels = std::move(kernels);
  return op;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double hash_unit(std::uint64_t seed, std::int64_t index) {
  std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 0x2545F4914F6CDD1Dull));
  (void)splitmix64(s);
  std::uint64_t z = splitmix64(s);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace fraclab
