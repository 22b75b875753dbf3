#include "fraclab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fraclab {

namespace {

void validate_problem(const ProblemSpec& prob, const Grid& g) {
  if (!(prob.gamma >= 0.0)) throw std::domain_error("gamma must be >= 0");
  if (prob.op.kernels.empty()) throw std::invalid_argument("problem has no operator kernels");
  if (!prob.data.grid.same_layout(g)) throw std::invalid_argument("data grid layout mismatch");
  if (!(prob.data.exterior.growth_exponent() < prob.op.sigma))
    throw std::domain_error("not in L1_sigma (exterior growth >= sigma)");
}

// Quadrature state shared by residual evaluations on one problem: hat-weight
// tables for every family kernel plus the pure kernel, per-node tail caches,
// and the extended lattice of current values.
class SolverCore {
 public:
  // Tail caches are built against `ext`, the exterior behavior held fixed by
  // the Dirichlet condition while the interior iterates.
  SolverCore(const ProblemSpec& prob, const QuadratureScheme& q, const ExteriorExtension& ext)
      : grid_(prob.data.grid), prob_(prob), q_(q) {
    validate_problem(prob, grid_);
    if (!(ext.growth_exponent() < prob.op.sigma))
      throw std::domain_error("not in L1_sigma (exterior growth >= sigma)");
    const Grid& g = grid_;
    n1_ = static_cast<int>(std::floor((1.0 - 1e-12) / g.h));
    n1_ = std::min(n1_, g.n_side - 1);
    n_int_ = 2 * n1_ + 1;
    const int m_max = g.n_side + n1_;

    const auto& kernels = prob.op.kernels;
    nk_ = static_cast<int>(kernels.size());
    tables_.reserve(static_cast<std::size_t>(nk_) + 1);
    for (const auto& spec : kernels) tables_.push_back(build_kernel_table(spec, g, q, m_max));
    pure_spec_ = make_frac_laplacian(prob.op.sigma);
    tables_.push_back(build_kernel_table(pure_spec_, g, q, m_max));

    // Per-node tail caches and scheme diagonals.  The exterior data is
    // Dirichlet, so these never change during the iteration.
    tail_ext_.assign(tables_.size(), std::vector<double>(static_cast<std::size_t>(n_int_)));
    tail_mass_.assign(tables_.size(), std::vector<double>(static_cast<std::size_t>(n_int_)));
    diag_.assign(tables_.size(), std::vector<double>(static_cast<std::size_t>(n_int_)));
    for (std::size_t k = 0; k < tables_.size(); ++k) {
      const KernelSpec& spec = k < static_cast<std::size_t>(nk_) ? kernels[k] : pure_spec_;
      for (int idx = 0; idx < n_int_; ++idx) {
        const long ic = idx - n1_;
        const int M = g.n_side + static_cast<int>(std::labs(ic));
        const double Z = M * g.h;
        const double x = g.centered(ic);
        tail_ext_[k][static_cast<std::size_t>(idx)] = tail_exterior_pair(
            spec, ext, x, Z, ext.oscillatory ? q.osc_tail_tol : q.tail_tol);
        double mass = kernel_tail_mass(spec, Z, q.tail_tol);
        tail_mass_[k][static_cast<std::size_t>(idx)] = mass;
        diag_[k][static_cast<std::size_t>(idx)] = scheme_diagonal(tables_[k], false, M, mass);
      }
    }

    L_ = 3L * g.n_side;
    uext_.assign(static_cast<std::size_t>(2 * L_ + 1), 0.0);
    int nthreads = 1;
#ifdef _OPENMP
    nthreads = omp_get_max_threads();
#endif
    scratch_.assign(static_cast<std::size_t>(std::max(nthreads, 1)),
                    std::vector<double>(static_cast<std::size_t>(m_max) + 1, 0.0));
    load(prob.data);
  }

  const Grid& grid() const { return grid_; }
  int n1() const { return n1_; }
  int n_interior() const { return n_int_; }

  void load(const GridFunction& u) {
    const Grid& g = grid_;
    for (long j = -L_; j <= L_; ++j) {
      uext_[static_cast<std::size_t>(j + L_)] =
          std::labs(j) <= g.n_side ? u.at_node(static_cast<int>(j + g.n_side))
                                   : u.exterior(g.centered(j));
    }
  }

  void set_interior(const std::vector<double>& interior) {
    for (int idx = 0; idx < n_int_; ++idx)
      uext_[static_cast<std::size_t>(idx - n1_ + L_)] = interior[static_cast<std::size_t>(idx)];
  }

  std::vector<double> interior_of(const GridFunction& u) const {
    std::vector<double> v(static_cast<std::size_t>(n_int_));
    for (int idx = 0; idx < n_int_; ++idx)
      v[static_cast<std::size_t>(idx)] = u.at_node(idx - n1_ + grid_.n_side);
    return v;
  }

  // Lattice dot product against a precomputed second-difference buffer.
  static double dot_weights(const double* __restrict__ D, const double* __restrict__ W, int m0,
                            int M) {
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    int m = m0;
    for (; m + 3 <= M; m += 4) {
      a0 += D[m] * W[m];
      a1 += D[m + 1] * W[m + 1];
      a2 += D[m + 2] * W[m + 2];
      a3 += D[m + 3] * W[m + 3];
    }
    for (; m <= M; ++m) a0 += D[m] * W[m];
    return (a0 + a1) + (a2 + a3);
  }

  // Residual, degenerate gradient factor, and the coefficient-advection
  // diagonal at every interior node.  One second-difference buffer per node
  // feeds all kernel tables.
  //
  // The gradient factor uses the monotone (Godunov) one-sided estimate
  // selected by the sign of the nonlocal value: with I(u,x) >= 0 the factor
  // max(D+ u + p, -(D- u + p), 0)^gamma is nondecreasing in both neighbors,
  // and with I < 0 the mirrored choice is nonincreasing, so the product
  // keeps the scheme monotone.  A central-difference factor couples the
  // neighbors with the wrong sign and locks the explicit march into
  // advective oscillations.
  void residual(double epsilon, std::vector<double>& r, std::vector<double>& gp,
                std::vector<double>& adv, Exec exec) {
    r.resize(static_cast<std::size_t>(n_int_));
    gp.resize(static_cast<std::size_t>(n_int_));
    adv.resize(static_cast<std::size_t>(n_int_));
#ifdef _OPENMP
    // thread count may have been raised since construction
    std::size_t want = static_cast<std::size_t>(std::max(omp_get_max_threads(), 1));
    if (scratch_.size() < want) scratch_.resize(want, scratch_.front());
#endif
    const double* base = uext_.data() + L_;
    const double invh = 1.0 / grid_.h;
    const double gamma = prob_.gamma;
    const double p = prob_.shift_p;
    const int m0 = tables_.front().m_delta;
    const double inv_d2 = 1.0 / (tables_.front().delta * tables_.front().delta);
    auto body = [&](int idx, std::vector<double>& D) {
      const long ic = idx - n1_;
      const int M = grid_.n_side + static_cast<int>(std::labs(ic));
      const double u0 = base[ic];
      const double* up = base + ic;
      for (int m = m0; m <= M; ++m) D[static_cast<std::size_t>(m)] = (up[m] - u0) + (up[-m] - u0);
      auto value_of = [&](std::size_t k) {
        const KernelQuadTable& T = tables_[k];
        double acc = dot_weights(D.data(), T.W.data(), m0, M);
        acc -= D[static_cast<std::size_t>(M)] * T.Wfall[static_cast<std::size_t>(M)];
        acc += D[static_cast<std::size_t>(m0)] * inv_d2 * T.A_delta;
        acc += tail_ext_[k][static_cast<std::size_t>(idx)];
        acc -= 2.0 * u0 * tail_mass_[k][static_cast<std::size_t>(idx)];
        return acc;
      };
      const int rows = prob_.op.rows, cols = prob_.op.cols;
      double inf = 0.0;
      for (int i = 0; i < rows; ++i) {
        double sup = 0.0;
        for (int j = 0; j < cols; ++j) {
          double v = value_of(static_cast<std::size_t>(i) * cols + j);
          if (j == 0 || v > sup) sup = v;
        }
        if (i == 0 || sup < inf) inf = sup;
      }
      double qp = (up[1] - u0) * invh + p;
      double qm = (u0 - up[-1]) * invh + p;
      double gr = inf >= 0.0 ? std::max({qp, -qm, 0.0}) : std::max({qm, -qp, 0.0});
      double g = gamma == 0.0 ? 1.0 : std::pow(gr, gamma);
      double v = epsilon * value_of(static_cast<std::size_t>(nk_)) + g * inf;
      double f = prob_.rhs ? prob_.rhs(grid_.centered(ic)) : 0.0;
      r[static_cast<std::size_t>(idx)] = v + f;
      gp[static_cast<std::size_t>(idx)] = g;
      // slope of gr -> gr^gamma, capped near the degenerate point for
      // exponents below one
      double slope = gamma == 0.0 ? 0.0 : gamma * std::pow(std::max(gr, 1e-8), gamma - 1.0);
      adv[static_cast<std::size_t>(idx)] = slope * std::fabs(inf) * invh;
    };
    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel
      {
        std::vector<double>& D = scratch_[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (int idx = 0; idx < n_int_; ++idx) body(idx, D);
      }
#else
      for (int idx = 0; idx < n_int_; ++idx) body(idx, scratch_[0]);
#endif
    } else {
      for (int idx = 0; idx < n_int_; ++idx) body(idx, scratch_[0]);
    }
  }

  // 1/(1 + diag_max) with the diagonal assembled from the quadrature
  // weights at the current gradient factors plus the coefficient-advection
  // term of the upwind factor.
  double dt_bound(double epsilon, const std::vector<double>& gp,
                  const std::vector<double>& adv) const {
    double worst = 0.0;
    for (int idx = 0; idx < n_int_; ++idx) {
      double fam = 0.0;
      for (int k = 0; k < nk_; ++k)
        fam = std::max(fam, diag_[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)]);
      double d = epsilon * diag_[static_cast<std::size_t>(nk_)][static_cast<std::size_t>(idx)] +
                 gp[static_cast<std::size_t>(idx)] * fam + adv[static_cast<std::size_t>(idx)];
      worst = std::max(worst, d);
    }
    return 1.0 / (1.0 + worst);
  }

 private:
  Grid grid_;
  ProblemSpec prob_;
  QuadratureScheme q_;
  KernelSpec pure_spec_;
  int n1_ = 0;
  int n_int_ = 0;
  int nk_ = 0;
  long L_ = 0;
  std::vector<KernelQuadTable> tables_;
  std::vector<std::vector<double>> tail_ext_, tail_mass_, diag_;
  std::vector<double> uext_;
  std::vector<std::vector<double>> scratch_;
};

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

std::vector<double> residual_field(const GridFunction& u, const ProblemSpec& prob, double epsilon,
                                   Exec exec, const QuadratureScheme& q) {
  if (!(epsilon >= 0.0)) throw std::domain_error("epsilon must be >= 0");
  if (!u.grid.same_layout(prob.data.grid))
    throw std::invalid_argument("residual_field: grid layout mismatch");
  SolverCore core(prob, q, u.exterior);
  core.load(u);
  std::vector<double> r, gp, adv;
  core.residual(epsilon, r, gp, adv, exec);
  return r;
}

GridFunction residual(const GridFunction& u, const ProblemSpec& prob, double epsilon) {
  std::vector<double> r = residual_field(u, prob, epsilon);
  GridFunction out = GridFunction::constant(u.grid, 0.0);
  out.exterior = ExteriorExtension::zero();
  const int n1 = (static_cast<int>(r.size()) - 1) / 2;
  for (std::size_t idx = 0; idx < r.size(); ++idx)
    out.values[static_cast<std::size_t>(static_cast<int>(idx) - n1 + u.grid.n_side)] = r[idx];
  return out;
}

double stability_dt_bound(const GridFunction& u, const ProblemSpec& prob, double epsilon) {
  SolverCore core(prob, {}, u.exterior);
  core.load(u);
  std::vector<double> r, gp, adv;
  core.residual(epsilon, r, gp, adv, Exec::serial);
  return core.dt_bound(epsilon, gp, adv);
}

GridFunction pseudo_time_step(const GridFunction& u, const ProblemSpec& prob, double epsilon,
                              double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pseudo_time_step: dt must be positive");
  SolverCore core(prob, {}, u.exterior);
  core.load(u);
  std::vector<double> r, gp, adv;
  core.residual(epsilon, r, gp, adv, Exec::serial);
  double bound = core.dt_bound(epsilon, gp, adv);
  if (dt > bound * (1.0 + 1e-12))
    throw std::invalid_argument("pseudo_time_step: dt exceeds the stability bound");
  GridFunction out = u;
  const int n1 = core.n1();
  for (int idx = 0; idx < core.n_interior(); ++idx) {
    int node = idx - n1 + u.grid.n_side;
    out.values[static_cast<std::size_t>(node)] += dt * r[static_cast<std::size_t>(idx)];
  }
  return out;
}

namespace {

ViscousResult march(SolverCore& core, GridFunction u, double epsilon, const SolveConfig& cfg) {
  std::vector<double> interior = core.interior_of(u);
  core.load(u);
  std::vector<double> r, gp, adv;
  ViscousResult out;
  for (int iter = 0;; ++iter) {
    core.residual(epsilon, r, gp, adv, cfg.exec);
    double res = sup_norm(r);
    if (!std::isfinite(res)) {
      out.residual = res;
      out.iters = iter;
      break;
    }
    if (res <= cfg.tol_residual) {
      out.converged = true;
      out.residual = res;
      out.iters = iter;
      break;
    }
    if (iter >= cfg.max_iters) {
      out.residual = res;
      out.iters = iter;
      break;
    }
    double dt = cfg.cfl_factor * core.dt_bound(epsilon, gp, adv);
    for (std::size_t i = 0; i < interior.size(); ++i) interior[i] += dt * r[i];
    core.set_interior(interior);
  }
  const int n1 = core.n1();
  for (int idx = 0; idx < core.n_interior(); ++idx)
    u.values[static_cast<std::size_t>(idx - n1 + u.grid.n_side)] =
        interior[static_cast<std::size_t>(idx)];
  out.u = std::move(u);
  return out;
}

}  // namespace

ViscousResult solve_viscous(const ProblemSpec& prob, double epsilon, const SolveConfig& cfg) {
  if (!(epsilon >= 0.0)) throw std::domain_error("solve_viscous: epsilon must be >= 0");
  if (!(cfg.tol_residual > 0.0)) throw std::invalid_argument("tol_residual must be positive");
  if (!(cfg.cfl_factor > 0.0 && cfg.cfl_factor < 1.0))
    throw std::invalid_argument("cfl_factor must lie in (0,1)");
  SolverCore core(prob, cfg.quad, prob.data.exterior);
  return march(core, prob.data, epsilon, cfg);
}

SolveReport solve_vanishing_viscosity(const ProblemSpec& prob, const SolveConfig& cfg) {
  if (cfg.epsilon_schedule.empty())
    throw std::invalid_argument("epsilon schedule must be nonempty");
  for (std::size_t i = 0; i < cfg.epsilon_schedule.size(); ++i) {
    if (!(cfg.epsilon_schedule[i] > 0.0))
      throw std::invalid_argument("epsilon schedule must be positive");
    if (i > 0 && !(cfg.epsilon_schedule[i] < cfg.epsilon_schedule[i - 1]))
      throw std::invalid_argument("epsilon schedule must be strictly decreasing");
  }
  SolverCore core(prob, cfg.quad, prob.data.exterior);
  SolveReport rep;
  GridFunction u = prob.data;
  GridFunction prev = u;
  for (std::size_t s = 0; s < cfg.epsilon_schedule.size(); ++s) {
    double eps = cfg.epsilon_schedule[s];
    ViscousResult vr = march(core, u, eps, cfg);
    u = vr.u;
    rep.stages.push_back({eps, vr.iters, vr.residual, vr.converged});
    rep.all_converged = rep.all_converged && vr.converged;
    if (s > 0) {
      NodeRange nr = nodes_in_ball(u.grid, 0.0, 0.5);
      double inc = 0.0;
      for (int i = nr.lo; i <= nr.hi; ++i)
        inc = std::max(inc, std::fabs(u.at_node(i) - prev.at_node(i)));
      rep.cauchy_b_half.push_back(inc);
    }
    prev = u;
  }
  rep.u = std::move(u);
  return rep;
}

CheckResult check_viscosity_inequality(const GridFunction& u, int node, const QuadraticPoly& test,
                                       ContactKind kind, const ProblemSpec& prob, double delta,
                                       double slack) {
  const Grid& g = u.grid;
  if (node < 0 || node >= g.size()) throw std::invalid_argument("node outside the grid");
  const double x = g.node(node);
  if (!(std::fabs(x) < 1.0)) throw std::invalid_argument("contact node must lie inside B_1");
  if (std::fabs(test.x0 - x) > 1e-12)
    throw std::invalid_argument("test polynomial must be centered at the contact node");
  const double scale = std::max(1.0, std::fabs(u.at_node(node)));
  if (std::fabs(test(x) - u.at_node(node)) > 1e-12 * scale)
    throw std::invalid_argument("test does not touch u at the contact node");
  NodeRange nr = nodes_in_ball(g, x, delta);
  for (int i = nr.lo; i <= nr.hi; ++i) {
    double gap = test(g.node(i)) - u.at_node(i);
    bool ok = kind == ContactKind::sub ? gap >= -1e-12 * scale : gap <= 1e-12 * scale;
    if (!ok) throw std::invalid_argument("contact condition violated on the test ball");
  }
  double gfac = test.grad_at_center() + prob.shift_p;
  if (std::fabs(gfac) <= 1e-14) return CheckResult::skipped;  // gradient guard
  double Idelta = eval_I_delta(u, test, prob.op, node, delta);
  double lhs = -std::pow(std::fabs(gfac), prob.gamma) * Idelta;
  double f = prob.rhs ? prob.rhs(x) : 0.0;
  bool pass = kind == ContactKind::sub ? lhs <= f + slack : lhs >= f - slack;
  return pass ? CheckResult::pass : CheckResult::fail;
}

}  // namespace fraclab
