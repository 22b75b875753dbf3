#pragma once

#include <span>

#include "fraclab/quadrature.hpp"

namespace fraclab {

enum class Exec { serial, parallel };

// P.V. linear operator I_K(u,x) evaluated by the symmetric-difference
// quadrature: paired differences u(x+z)+u(x-z)-2u(x) against hat-product
// weights of the kernel, an inner second-moment term below the cutoff, and
// an adaptive tail against the exterior extension beyond Z = R + |x|.
double eval_linear(const GridFunction& u, const KernelSpec& spec, int node,
                   const QuadratureScheme& q = {});

// inf over rows of sup over columns of the linear evaluations.
double eval_isaacs(const GridFunction& u, const IsaacsOperator& op, int node,
                   const QuadratureScheme& q = {});

enum class ExtremalSign { minus, plus };

// Extremal (Pucci-type) operators of the band class: the same quadrature
// nodes and pure-kernel weights as eval_linear with the positive/negative
// parts of each paired difference weighted by Lambda/lambda, so the sandwich
// minus <= I_K <= plus holds term by term for every admissible kernel.
double eval_pucci(const GridFunction& u, int node, ExtremalSign sign, double sigma, double lambda,
                  double Lambda, const QuadratureScheme& q = {});

// Quadratic test polynomial phi(y) = c0 + c1 (y-x0) + c2 (y-x0)^2.
struct QuadraticPoly {
  double x0 = 0.0, c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double operator()(double y) const {
    double t = y - x0;
    return c0 + t * (c1 + t * c2);
  }
  double grad_at_center() const { return c1; }
  double second() const { return 2.0 * c2; }
};

// Split evaluation of the viscosity-solution definition: the test polynomial
// on B_delta (exact second-moment integral) plus plain symmetric differences
// of u on the complement.
double eval_I_delta(const GridFunction& u, const QuadraticPoly& test, const IsaacsOperator& op,
                    int node, double delta, const QuadratureScheme& q = {});

// inf_i sup_j k_ij D2_h u(x) with the central second difference: the local
// second-order limit of the inf-sup family.
double eval_local_limit(const GridFunction& u, std::span<const double> k, int rows, int cols,
                        int node);

// Gradient-rescaled-jump operator of p-Laplacian type, p_exp > 2.  In one
// dimension the substitution w = j z turns the compensated integral into
// j^sigma times the pure-power evaluation, with j = |Du|^{(p-2)/2} (1+r_p)
// and Du the central difference.
double eval_frac_p_laplacian(const GridFunction& u, double sigma, double p_exp, double r_p,
                             int node, const QuadratureScheme& q = {});

// Operator evaluation across all quadrature-valid nodes (|x| < R-1).
// The parallel path distributes nodes over OpenMP threads; each node's sum
// runs in a fixed serial order, so results are byte-identical to the serial
// reference path.
struct SweepResult {
  std::vector<int> nodes;
  std::vector<double> values;
};
SweepResult eval_linear_sweep(const GridFunction& u, const KernelSpec& spec,
                              const QuadratureScheme& q, Exec exec);
SweepResult eval_isaacs_sweep(const GridFunction& u, const IsaacsOperator& op,
                              const QuadratureScheme& q, Exec exec);
SweepResult eval_pucci_sweep(const GridFunction& u, ExtremalSign sign, double sigma, double lambda,
                             double Lambda, const QuadratureScheme& q, Exec exec);
SweepResult eval_frac_p_sweep(const GridFunction& u, double sigma, double p_exp, double r_p,
                              const QuadratureScheme& q, Exec exec);

}  // namespace fraclab
