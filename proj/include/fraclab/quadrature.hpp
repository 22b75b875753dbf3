#pragma once

#include <array>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/kernels.hpp"

namespace fraclab {

struct QuadratureScheme {
  // Inner cutoff below which the kernel second moment multiplies a central
  // second difference at the cutoff scale.  0 selects sqrt(h) snapped to the
  // lattice (capped at |z| = 1), which keeps both the quadrature error and
  // the explicit-marching stiffness at O(h^{-sigma/2}) scale.
  double delta_inner = 0.0;
  double tail_tol = 1e-10;     // adaptive tail tolerance, non-oscillatory
  double osc_tail_tol = 1e-8;  // alternating-series tolerance, oscillatory
};

// 16-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> kGaussX = {
    0.09501250983763744019, 0.28160355077925891323, 0.45801677765722738634,
    0.61787624440264374845, 0.75540440835500303390, 0.86563120238783174388,
    0.94457502307323257608, 0.98940093499164993260};
inline constexpr std::array<double, 8> kGaussW = {
    0.18945061045506849629, 0.18260341504492358887, 0.16915651939500253819,
    0.14959598881657673208, 0.12462897125553387205, 0.09515851168249278481,
    0.06225352393864789286, 0.02715245941175409485};

template <class F>
double gauss_panel(double a, double b, F&& f) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double acc = 0.0;
  for (int k = 0; k < 8; ++k) {
    acc += kGaussW[k] * (f(c + r * kGaussX[k]) + f(c - r * kGaussX[k]));
  }
  return acc * r;
}

// ∫_a^b z^e dz with the logarithm branch at e == -1.
double power_integral(double a, double b, double e);

// ∫_0^hi z^zpow K(z) dz by dyadic-to-zero panels with Gauss-Legendre nodes.
// The panel set depends only on (sigma, hi), never on the multiplier, so
// pointwise band bounds on kappa survive the quadrature exactly.
double kernel_moment(const KernelSpec& spec, double hi, int zpow, bool pure = false);

// ∫_Z^inf K(z) dz by dyadic panels; stopping rule uses the closed-form pure
// tail so the panel set is identical for every kernel of the same order.
double kernel_tail_mass(const KernelSpec& spec, double Z, double tol, bool pure = false);

// ∫_Z^inf (ext(x+z) + ext(x-z)) K(z) dz.  Dyadic panels with an envelope
// stopping rule; the oscillatory callable tag instead walks pi-width panels
// and stops by the alternating-series bound.
double tail_exterior_pair(const KernelSpec& spec, const ExteriorExtension& ext, double x,
                          double Z, double tol, bool pure = false);

// ∫_Z^inf [Lam d_+ - lam d_-] C|z|^{-1-sigma} dz (or the minus variant) with
// d(z) = ext(x+z) + ext(x-z) - 2 u_x, against the pure-power kernel.
double tail_extremal(double sigma, const ExteriorExtension& ext, double x, double u_x, double Z,
                     double lam, double Lam, bool plus, double tol);

// ∫_Z^inf g(y) (1+y)^{-(1+sigma)} dy for |g| = O(y^growth), growth < sigma.
double weighted_tail(const std::function<double(double)>& g, double growth, double Z,
                     double sigma, double tol);

// Product-integration weights of the kernel against lattice hat functions on
// [delta, m_max h], plus the inner second moment on [0, delta].  fall[m] is
// the falling-cell part of hat m over [mh, (m+1)h]; truncating the sum at
// node M and subtracting D(M) fall[M] realizes hats supported on [delta, Mh].
struct KernelQuadTable {
  double sigma = 1.0;
  double h = 0.0;
  double Csig = 0.0;
  int m_delta = 1;
  double delta = 0.0;
  double A_delta = 0.0;       // ∫_0^delta z^2 K(z) dz with the multiplier
  double A_delta_pure = 0.0;  // pure-power variant
  int m_max = 0;
  std::vector<double> W, Wfall;    // kappa(mh) * pure hat / fall parts
  std::vector<double> Wp, Wpfall;  // pure hat / fall parts
};

int default_m_delta(const Grid& g, const QuadratureScheme& q);
KernelQuadTable build_kernel_table(const KernelSpec& spec, const Grid& g,
                                   const QuadratureScheme& q, int m_max);

namespace detail {
// Pure-kernel hat weights on the lattice: rise of node m over
// [max((m-1)h, z_lo), mh], fall over [mh, (m+1)h].
void pure_hat_weights(double sigma, double h, double z_lo, int m_from, int m_max,
                      std::vector<double>& W, std::vector<double>& Wfall);
}  // namespace detail

// Lattice part of the symmetric-difference quadrature at centered node ic
// with truncation at M lattice steps: second differences against the hat
// weights plus the inner-moment term at the cutoff scale.  `lat` maps a
// centered lattice index to a value.
template <class Acc, class Lat>
Acc lattice_sum(const KernelQuadTable& T, bool pure, long ic, int M, Lat&& lat) {
  const double* W = (pure ? T.Wp : T.W).data();
  const std::vector<double>& Wf = pure ? T.Wpfall : T.Wfall;
  const double u0 = lat(ic);
  // four independent accumulators break the dependency chain; the order is
  // fixed, so results are identical across runs and thread counts
  Acc a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  int m = T.m_delta;
  for (; m + 3 <= M; m += 4) {
    a0 += ((lat(ic + m) - u0) + (lat(ic - m) - u0)) * W[m];
    a1 += ((lat(ic + m + 1) - u0) + (lat(ic - m - 1) - u0)) * W[m + 1];
    a2 += ((lat(ic + m + 2) - u0) + (lat(ic - m - 2) - u0)) * W[m + 2];
    a3 += ((lat(ic + m + 3) - u0) + (lat(ic - m - 3) - u0)) * W[m + 3];
  }
  for (; m <= M; ++m) a0 += ((lat(ic + m) - u0) + (lat(ic - m) - u0)) * W[m];
  Acc acc = (a0 + a1) + (a2 + a3);
  acc -= ((lat(ic + M) - u0) + (lat(ic - M) - u0)) * static_cast<Acc>(Wf[M]);
  Acc dd = (lat(ic + T.m_delta) - u0) + (lat(ic - T.m_delta) - u0);
  acc += dd / (T.delta * T.delta) * static_cast<Acc>(pure ? T.A_delta_pure : T.A_delta);
  return acc;
}

// Diagonal coefficient of the scheme (the weight multiplying -2 u(x)),
// including the tail mass for truncation radius Z = M h.  Governs the
// explicit-marching stability bound.
double scheme_diagonal(const KernelQuadTable& T, bool pure, int M, double tail_mass);

}  // namespace fraclab
