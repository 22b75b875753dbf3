#include "fraclab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fraclab {

namespace {

double growth_for_pair(const ExteriorExtension& ext) {
  // The paired sum ext(x+z) + ext(x-z) of an affine extension is constant in
  // z, so only the power/callable tags keep their growth in the tail walk.
  using Tag = ExteriorExtension::Tag;
  switch (ext.tag) {
    case Tag::zero:
    case Tag::constant:
    case Tag::affine:
      return 0.0;
    case Tag::power:
      return ext.b;
    case Tag::callable:
      return ext.callable_growth;
  }
  return 0.0;
}

}  // namespace

double power_integral(double a, double b, double e) {
  if (e == -1.0) return std::log(b / a);
  return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
}

double kernel_moment(const KernelSpec& spec, double hi, int zpow, bool pure) {
  if (!(hi > 0.0)) throw std::invalid_argument("kernel_moment: need hi > 0");
  const double sigma = spec.sigma;
  const double C = normalization_constant(sigma);
  const double e = zpow - 1.0 - sigma;
  if (e <= -1.0) throw std::domain_error("kernel_moment: divergent moment");
  // substitution w = z^{e+1} flattens the endpoint singularity: the
  // integrand becomes C kappa(w^{1/(e+1)}) / (e+1), bounded on (0, hi^{e+1}]
  const double q = e + 1.0;
  const double W = std::pow(hi, q);
  if (pure || spec.pure()) return C * W / q;
  auto integrand = [&](double w) { return (C / q) * spec.kappa(std::pow(w, 1.0 / q)); };
  const double total_scale = C * W / q;
  double acc = 0.0;
  double b = W;
  for (int j = 0; j < 1200; ++j) {
    double a = 0.5 * b;
    acc += gauss_panel(a, b, integrand);
    // bounded integrand: the remaining piece is at most O(a) in measure
    if ((C / q) * a * 4.0 <= 1e-16 * total_scale || a == 0.0) break;
    b = a;
  }
  return acc;
}

double kernel_tail_mass(const KernelSpec& spec, double Z, double tol, bool pure) {
  if (!(Z > 0.0)) throw std::invalid_argument("kernel_tail_mass: need Z > 0");
  const double sigma = spec.sigma;
  const double C = normalization_constant(sigma);
  auto integrand = [&](double z) {
    double k = pure ? 1.0 : spec.kappa(z);
    return C * k * std::pow(z, -1.0 - sigma);
  };
  const double stop = tol * (1.0 - std::exp2(-sigma)) * 0.5;
  double acc = 0.0;
  double a = Z;
  for (int j = 0; j < 4000; ++j) {
    double b = 2.0 * a;
    acc += gauss_panel(a, b, integrand);
    double panel_pure = C * power_integral(a, b, -1.0 - sigma);
    if (panel_pure <= stop) break;
    a = b;
  }
  return acc;
}

double tail_exterior_pair(const KernelSpec& spec, const ExteriorExtension& ext, double x,
                          double Z, double tol, bool pure) {
  using Tag = ExteriorExtension::Tag;
  if (ext.tag == Tag::zero) return 0.0;
  // constant and affine pair sums are constant in z; route them through the
  // same tail-mass quadrature so constants and affine functions annihilate
  // exactly against the -2u(x) term
  if (ext.tag == Tag::constant) return 2.0 * ext.a * kernel_tail_mass(spec, Z, tol, pure);
  if (ext.tag == Tag::affine)
    return (2.0 * ext.a + 2.0 * ext.b * x) * kernel_tail_mass(spec, Z, tol, pure);
  const double sigma = spec.sigma;
  const double C = normalization_constant(sigma);
  auto kernel = [&](double z) {
    double k = pure ? 1.0 : spec.kappa(z);
    return C * k * std::pow(z, -1.0 - sigma);
  };
  auto pair_sum = [&](double z) { return ext(x + z) + ext(x - z); };

  if (ext.tag == Tag::callable && ext.oscillatory) {
    // Bounded oscillatory extension: fixed-width panels aligned with the
    // sign changes; partial sums alternate, so the first omitted panel
    // bounds the remainder.
    const double w = std::numbers::pi_v<double>;
    double acc = 0.0;
    double a = Z;
    for (long k = 0; k < 40000000L; ++k) {
      double b = a + w;
      double v = gauss_panel(a, b, [&](double z) { return pair_sum(z) * kernel(z); });
      acc += v;
      if (k >= 8 && std::fabs(v) <= tol) return acc;
      a = b;
    }
    throw std::runtime_error("tail_exterior_pair: oscillatory tail did not settle");
  }

  const double growth = growth_for_pair(ext);
  if (!(growth < sigma))
    throw std::domain_error("tail_exterior_pair: not in L1_sigma (tail grows too fast)");
  const double ratio = std::exp2(growth - sigma);
  const double stop = tol * (1.0 - ratio) * 0.5;
  double acc = 0.0;
  double a = Z;
  for (int j = 0; j < 2000; ++j) {
    double b = 2.0 * a;
    acc += gauss_panel(a, b, [&](double z) { return pair_sum(z) * kernel(z); });
    double env = gauss_panel(a, b, [&](double z) {
      return std::fabs(pair_sum(z)) * C * std::pow(z, -1.0 - sigma);
    });
    if (env <= stop) break;
    a = b;
  }
  return acc;
}

double tail_extremal(double sigma, const ExteriorExtension& ext, double x, double u_x, double Z,
                     double lam, double Lam, bool plus, double tol) {
  using Tag = ExteriorExtension::Tag;
  const double C = normalization_constant(sigma);
  if (ext.tag == Tag::callable && ext.oscillatory && sigma <= 1.0)
    throw std::domain_error("tail_extremal: oscillatory extension needs sigma > 1");
  double growth = growth_for_pair(ext);
  if (ext.tag == Tag::callable && ext.oscillatory) growth = 0.0;
  if (!(growth < sigma))
    throw std::domain_error("tail_extremal: not in L1_sigma (tail grows too fast)");
  // plus -> Lam d_+ - lam d_-, minus -> lam d_+ - Lam d_-
  auto g = [&](double z) {
    double d = ext(x + z) + ext(x - z) - 2.0 * u_x;
    double dp = std::max(d, 0.0), dm = std::max(-d, 0.0);
    double v = plus ? Lam * dp - lam * dm : lam * dp - Lam * dm;
    return v * C * std::pow(z, -1.0 - sigma);
  };
  const double ratio = std::exp2(growth - sigma);
  const double stop = tol * (1.0 - ratio) * 0.5;
  double acc = 0.0;
  double a = Z;
  for (int j = 0; j < 2000; ++j) {
    double b = 2.0 * a;
    acc += gauss_panel(a, b, g);
    double env = gauss_panel(a, b, [&](double z) {
      return (std::fabs(ext(x + z) + ext(x - z)) + 2.0 * std::fabs(u_x)) * C *
             std::pow(z, -1.0 - sigma);
    });
    if (env <= stop) break;
    a = b;
  }
  return acc;
}

double weighted_tail(const std::function<double(double)>& g, double growth, double Z,
                     double sigma, double tol) {
  if (!(growth < sigma)) throw std::domain_error("weighted_tail: divergent (growth >= sigma)");
  const double ratio = std::exp2(growth - sigma);
  const double stop = tol * (1.0 - ratio) * 0.5;
  auto f = [&](double y) { return g(y) * std::pow(1.0 + y, -1.0 - sigma); };
  double acc = 0.0;
  double a = Z;
  for (int j = 0; j < 2000; ++j) {
    double b = 2.0 * a;
    double v = gauss_panel(a, b, f);
    acc += v;
    if (std::fabs(v) <= stop) break;
    a = b;
  }
  return acc;
}

namespace detail {

// Pure-kernel hat weights, both cell pieces clipped at z_lo: rise of node m
// over [max((m-1)h, z_lo), mh], fall over [max(mh, z_lo), (m+1)h].  Closed
// power-law antiderivatives.
void pure_hat_weights(double sigma, double h, double z_lo, int m_from, int m_max,
                      std::vector<double>& W, std::vector<double>& Wfall) {
  const double C = normalization_constant(sigma);
  W.assign(static_cast<std::size_t>(m_max) + 1, 0.0);
  Wfall.assign(static_cast<std::size_t>(m_max) + 1, 0.0);
  for (int m = m_from; m <= m_max; ++m) {
    const double zm = m * h;
    const double zprev = (m - 1) * h;
    const double znext = (m + 1) * h;
    double rise = 0.0;
    double lo = std::max(zprev, z_lo);
    if (lo < zm) {
      rise = (power_integral(lo, zm, -sigma) - zprev * power_integral(lo, zm, -1.0 - sigma)) / h;
    }
    double fall = 0.0;
    double flo = std::max(zm, z_lo);
    if (flo < znext) {
      fall = (znext * power_integral(flo, znext, -1.0 - sigma) -
              power_integral(flo, znext, -sigma)) /
             h;
    }
    W[static_cast<std::size_t>(m)] = C * (rise + fall);
    Wfall[static_cast<std::size_t>(m)] = C * fall;
  }
}

}  // namespace detail

int default_m_delta(const Grid& g, const QuadratureScheme& q) {
  int m;
  if (q.delta_inner > 0.0) {
    m = static_cast<int>(std::lround(q.delta_inner / g.h));
  } else {
    m = static_cast<int>(std::lround(std::sqrt(1.0 / g.h)));
  }
  int cap = static_cast<int>(std::lround(1.0 / g.h));  // delta <= 1
  m = std::min(m, std::max(cap, 1));
  m = std::min(m, std::max(g.n_side / 2, 1));
  return std::max(m, 1);
}

KernelQuadTable build_kernel_table(const KernelSpec& spec, const Grid& g,
                                   const QuadratureScheme& q, int m_max) {
  KernelQuadTable T;
  T.sigma = spec.sigma;
  T.h = g.h;
  T.Csig = normalization_constant(spec.sigma);
  T.m_delta = default_m_delta(g, q);
  T.delta = T.m_delta * g.h;
  T.m_max = m_max;
  if (m_max < T.m_delta) throw std::invalid_argument("build_kernel_table: m_max below the cutoff");
  T.A_delta = kernel_moment(spec, T.delta, 2, false);
  T.A_delta_pure = kernel_moment(spec, T.delta, 2, true);
  detail::pure_hat_weights(spec.sigma, g.h, T.delta, T.m_delta, m_max, T.Wp, T.Wpfall);
  T.W = T.Wp;
  T.Wfall = T.Wpfall;
  if (!spec.pure()) {
    for (int m = T.m_delta; m <= m_max; ++m) {
      double k = spec.kappa(m * g.h);
      T.W[static_cast<std::size_t>(m)] *= k;
      T.Wfall[static_cast<std::size_t>(m)] *= k;
    }
  }
  return T;
}

double scheme_diagonal(const KernelQuadTable& T, bool pure, int M, double tail_mass) {
  const std::vector<double>& W = pure ? T.Wp : T.W;
  const std::vector<double>& Wf = pure ? T.Wpfall : T.Wfall;
  double s = 0.0;
  for (int m = T.m_delta; m <= M; ++m) s += W[static_cast<std::size_t>(m)];
  s -= Wf[static_cast<std::size_t>(M)];
  s += (pure ? T.A_delta_pure : T.A_delta) / (T.delta * T.delta);
  s += tail_mass;
  return 2.0 * s;
}

}  // namespace fraclab
