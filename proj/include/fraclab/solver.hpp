#pragma once

#include <functional>

#include "fraclab/nonlocal_ops.hpp"

namespace fraclab {

// Dirichlet problem for -eps D^{sigma/2} u - |Du + p|^gamma I(u) = f on B_1.
// `data` supplies the Dirichlet values on the grid outside B_1 plus the
// exterior extension beyond R; its interior entries seed the iteration.
struct ProblemSpec {
  double gamma = 0.0;
  double shift_p = 0.0;
  std::function<double(double)> rhs;  // f on B_1; empty means f == 0
  GridFunction data;
  IsaacsOperator op;
};

struct SolveConfig {
  std::vector<double> epsilon_schedule = {0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};
  // Fraction of the frozen-coefficient stability bound.  The degenerate
  // gradient factor is re-evaluated each step, not frozen, so values much
  // above 1/2 can lock the Jacobi update into a two-cycle.
  double cfl_factor = 0.45;
  double tol_residual = 1e-6;
  int max_iters = 50000;
  Exec exec = Exec::parallel;
  QuadratureScheme quad;
};

// r(x) = eps I_pure(u,x) + |D_h u(x) + p|^gamma I_op(u,x) + f(x) on the
// interior nodes of B_1 (|x| < 1); u solves the discrete problem iff
// sup|r| <= tol.  D_h is the central difference.
std::vector<double> residual_field(const GridFunction& u, const ProblemSpec& prob, double epsilon,
                                   Exec exec = Exec::serial, const QuadratureScheme& q = {});
// Same values written into a grid function (zero outside the B_1 interior).
GridFunction residual(const GridFunction& u, const ProblemSpec& prob, double epsilon);

// Largest dt for which the explicit update stays monotone: 1/(1 + diag_max)
// with diag_max the scheme diagonal at the current gradient field.
double stability_dt_bound(const GridFunction& u, const ProblemSpec& prob, double epsilon);

// u + dt * residual on interior nodes; Dirichlet elsewhere.  dt above the
// stability bound is a usage error.
GridFunction pseudo_time_step(const GridFunction& u, const ProblemSpec& prob, double epsilon,
                              double dt);

struct ViscousResult {
  GridFunction u;
  int iters = 0;
  double residual = 0.0;
  bool converged = false;
};
// Explicit monotone marching at fixed epsilon > 0 until sup|r| <= tol.
ViscousResult solve_viscous(const ProblemSpec& prob, double epsilon, const SolveConfig& cfg);

struct StageReport {
  double epsilon = 0.0;
  int iters = 0;
  double residual = 0.0;
  bool converged = false;
};
struct SolveReport {
  GridFunction u;
  std::vector<StageReport> stages;
  std::vector<double> cauchy_b_half;  // sup_{|x|<=1/2} |u_k - u_{k+1}|
  bool all_converged = true;
};
// Warm-started sweep over the epsilon schedule.
SolveReport solve_vanishing_viscosity(const ProblemSpec& prob, const SolveConfig& cfg);

enum class ContactKind { sub, super };
enum class CheckResult { pass, fail, skipped };

// Discrete viscosity inequality at a contact node.  The test polynomial must
// touch u at the node (from above for sub, below for super) on the grid ball
// B_delta(x); contact violations are usage errors.  Returns skipped when the
// gradient guard |D test(x) + p| = 0 applies.
CheckResult check_viscosity_inequality(const GridFunction& u, int node, const QuadraticPoly& test,
                                       ContactKind kind, const ProblemSpec& prob, double delta,
                                       double slack = 1e-9);

}  // namespace fraclab
