#include "fraclab/nonlocal_ops.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fraclab {

namespace {

void require_interior(const GridFunction& u, int node) {
  const Grid& g = u.grid;
  if (node < 0 || node >= g.size()) throw std::domain_error("node index outside the grid");
  double x = std::fabs(g.node(node));
  if (!(x < g.R - 1.0 - 1e-12 * g.R))
    throw std::domain_error("node is not interior (|x| < R - 1 required)");
}

void require_integrable(const GridFunction& u, double sigma) {
  if (!(u.exterior.growth_exponent() < sigma))
    throw std::domain_error("not in L1_sigma (exterior growth >= sigma)");
}

double tail_tol_for(const ExteriorExtension& ext, const QuadratureScheme& q) {
  return (ext.tag == ExteriorExtension::Tag::callable && ext.oscillatory) ? q.osc_tail_tol
                                                                          : q.tail_tol;
}

double linear_with_table(const GridFunction& u, const KernelSpec& spec, const KernelQuadTable& T,
                         int node, const QuadratureScheme& q) {
  const Grid& g = u.grid;
  const long ic = node - g.n_side;
  const int M = g.n_side + static_cast<int>(std::labs(ic));
  auto lat = [&u](long j) { return u.lattice(j); };
  long double acc = lattice_sum<long double>(T, false, ic, M, lat);
  const double Z = M * g.h;
  const double x = g.node(node);
  // combine the tail pieces in double so constant and affine pair sums
  // cancel against the -2u(x) mass term exactly
  double tail = tail_exterior_pair(spec, u.exterior, x, Z, tail_tol_for(u.exterior, q)) -
                2.0 * u.at_node(node) * kernel_tail_mass(spec, Z, q.tail_tol);
  acc += tail;
  return static_cast<double>(acc);
}

}  // namespace

double eval_linear(const GridFunction& u, const KernelSpec& spec, int node,
                   const QuadratureScheme& q) {
  require_interior(u, node);
  require_integrable(u, spec.sigma);
  const long ic = node - u.grid.n_side;
  const int M = u.grid.n_side + static_cast<int>(std::labs(ic));
  KernelQuadTable T = build_kernel_table(spec, u.grid, q, M);
  return linear_with_table(u, spec, T, node, q);
}

double eval_isaacs(const GridFunction& u, const IsaacsOperator& op, int node,
                   const QuadratureScheme& q) {
  require_interior(u, node);
  require_integrable(u, op.sigma);
  const long ic = node - u.grid.n_side;
  const int M = u.grid.n_side + static_cast<int>(std::labs(ic));
  double inf = 0.0;
  for (int i = 0; i < op.rows; ++i) {
    double sup = 0.0;
    for (int j = 0; j < op.cols; ++j) {
      const KernelSpec& spec = op.at(i, j);
      KernelQuadTable T = build_kernel_table(spec, u.grid, q, M);
      double v = linear_with_table(u, spec, T, node, q);
      if (j == 0 || v > sup) sup = v;
    }
    if (i == 0 || sup < inf) inf = sup;
  }
  return inf;
}

double eval_pucci(const GridFunction& u, int node, ExtremalSign sign, double sigma, double lambda,
                  double Lambda, const QuadratureScheme& q) {
  require_interior(u, node);
  require_integrable(u, sigma);
  if (!(lambda > 0.0 && lambda <= Lambda))
    throw std::invalid_argument("eval_pucci: need 0 < lambda <= Lambda");
  const bool plus = sign == ExtremalSign::plus;
  const Grid& g = u.grid;
  const long ic = node - g.n_side;
  const int M = g.n_side + static_cast<int>(std::labs(ic));
  KernelSpec pure = make_frac_laplacian(sigma);
  KernelQuadTable T = build_kernel_table(pure, g, q, M);
  const double u0 = u.at_node(node);
  auto extremal = [&](double d) {
    double dp = std::max(d, 0.0), dm = std::max(-d, 0.0);
    return plus ? Lambda * dp - lambda * dm : lambda * dp - Lambda * dm;
  };
  long double acc = 0.0;
  for (int m = T.m_delta; m <= M; ++m) {
    double w = T.Wp[static_cast<std::size_t>(m)];
    if (m == M) w -= T.Wpfall[static_cast<std::size_t>(m)];
    double d = (u.lattice(ic + m) - u0) + (u.lattice(ic - m) - u0);
    acc += extremal(d) * static_cast<long double>(w);
  }
  double dd = (u.lattice(ic + T.m_delta) - u0) + (u.lattice(ic - T.m_delta) - u0);
  acc += extremal(dd) * static_cast<long double>(T.A_delta_pure / (T.delta * T.delta));
  const double Z = M * g.h;
  acc += tail_extremal(sigma, u.exterior, g.node(node), u0, Z, lambda, Lambda, plus,
                       tail_tol_for(u.exterior, q));
  return static_cast<double>(acc);
}

double eval_I_delta(const GridFunction& u, const QuadraticPoly& test, const IsaacsOperator& op,
                    int node, double delta, const QuadratureScheme& q) {
  require_interior(u, node);
  require_integrable(u, op.sigma);
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("eval_I_delta: delta must lie in (0,1]");
  const Grid& g = u.grid;
  const long ic = node - g.n_side;
  const int M = g.n_side + static_cast<int>(std::labs(ic));
  // start from the node just below delta so the clipped falling piece of the
  // first cell is represented (its u-values sit within one h of the cut)
  const int m0 = std::max(1, static_cast<int>(std::floor(delta / g.h + 1e-9)));
  const double u0 = u.at_node(node);
  const double x = g.node(node);
  const double Z = M * g.h;
  const double phi2 = test.second();

  std::vector<double> W, Wfall;
  detail::pure_hat_weights(op.sigma, g.h, delta, m0, M, W, Wfall);

  double inf = 0.0;
  for (int i = 0; i < op.rows; ++i) {
    double sup = 0.0;
    for (int j = 0; j < op.cols; ++j) {
      const KernelSpec& spec = op.at(i, j);
      // test polynomial on B_delta: paired second difference is exactly
      // phi'' z^2, so the inner part is phi'' times the second moment
      long double acc = phi2 * static_cast<long double>(kernel_moment(spec, delta, 2));
      for (int m = m0; m <= M; ++m) {
        double w = W[static_cast<std::size_t>(m)];
        if (m == M) w -= Wfall[static_cast<std::size_t>(m)];
        w *= spec.kappa(m * g.h);
        double d = (u.lattice(ic + m) - u0) + (u.lattice(ic - m) - u0);
        acc += d * static_cast<long double>(w);
      }
      double tail = tail_exterior_pair(spec, u.exterior, x, Z, tail_tol_for(u.exterior, q)) -
                    2.0 * u0 * kernel_tail_mass(spec, Z, q.tail_tol);
      acc += tail;
      double v = static_cast<double>(acc);
      if (j == 0 || v > sup) sup = v;
    }
    if (i == 0 || sup < inf) inf = sup;
  }
  return inf;
}

double eval_local_limit(const GridFunction& u, std::span<const double> k, int rows, int cols,
                        int node) {
  if (rows < 1 || cols < 1 || k.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("eval_local_limit: bad multiplier table");
  const Grid& g = u.grid;
  if (node < 1 || node > 2 * g.n_side - 1)
    throw std::domain_error("eval_local_limit: node is not interior");
  for (double v : k)
    if (!(v > 0.0)) throw std::invalid_argument("eval_local_limit: multipliers must be positive");
  double d2 = (u.at_node(node + 1) + u.at_node(node - 1) - 2.0 * u.at_node(node)) / (g.h * g.h);
  double inf = 0.0;
  for (int i = 0; i < rows; ++i) {
    double sup = 0.0;
    for (int j = 0; j < cols; ++j) {
      double v = k[static_cast<std::size_t>(i) * cols + j] * d2;
      if (j == 0 || v > sup) sup = v;
    }
    if (i == 0 || sup < inf) inf = sup;
  }
  return inf;
}

double eval_frac_p_laplacian(const GridFunction& u, double sigma, double p_exp, double r_p,
                             int node, const QuadratureScheme& q) {
  if (!(p_exp > 2.0)) throw std::domain_error("eval_frac_p_laplacian: p must exceed 2");
  if (!(r_p >= 0.0)) throw std::domain_error("eval_frac_p_laplacian: r_p must be >= 0");
  require_interior(u, node);
  const Grid& g = u.grid;
  const long ic = node - g.n_side;
  double grad = (u.lattice(ic + 1) - u.lattice(ic - 1)) / (2.0 * g.h);
  if (grad == 0.0) return 0.0;  // zero jump size: the integrand vanishes
  double jump = std::pow(std::fabs(grad), 0.5 * (p_exp - 2.0)) * (1.0 + r_p);
  // substitution w = jump * z extracts jump^sigma from the compensated
  // integral and leaves the pure-power evaluation
  return std::pow(jump, sigma) * eval_linear(u, make_frac_laplacian(sigma), node, q);
}

namespace {

template <class F>
SweepResult run_sweep(const GridFunction& u, Exec exec, F&& per_node) {
  const Grid& g = u.grid;
  SweepResult out;
  for (int i = 0; i < g.size(); ++i) {
    if (std::fabs(g.node(i)) < g.R - 1.0 - 1e-12 * g.R) out.nodes.push_back(i);
  }
  out.values.assign(out.nodes.size(), 0.0);
  const int n = static_cast<int>(out.nodes.size());
  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int k = 0; k < n; ++k)
      out.values[static_cast<std::size_t>(k)] = per_node(out.nodes[static_cast<std::size_t>(k)]);
  } else {
    for (int k = 0; k < n; ++k)
      out.values[static_cast<std::size_t>(k)] = per_node(out.nodes[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace

SweepResult eval_linear_sweep(const GridFunction& u, const KernelSpec& spec,
                              const QuadratureScheme& q, Exec exec) {
  require_integrable(u, spec.sigma);
  KernelQuadTable T = build_kernel_table(spec, u.grid, q, 2 * u.grid.n_side);
  return run_sweep(u, exec, [&](int node) { return linear_with_table(u, spec, T, node, q); });
}

SweepResult eval_isaacs_sweep(const GridFunction& u, const IsaacsOperator& op,
                              const QuadratureScheme& q, Exec exec) {
  require_integrable(u, op.sigma);
  std::vector<KernelQuadTable> tables;
  tables.reserve(op.kernels.size());
  for (const auto& spec : op.kernels)
    tables.push_back(build_kernel_table(spec, u.grid, q, 2 * u.grid.n_side));
  return run_sweep(u, exec, [&](int node) {
    double inf = 0.0;
    for (int i = 0; i < op.rows; ++i) {
      double sup = 0.0;
      for (int j = 0; j < op.cols; ++j) {
        std::size_t k = static_cast<std::size_t>(i) * op.cols + j;
        double v = linear_with_table(u, op.kernels[k], tables[k], node, q);
        if (j == 0 || v > sup) sup = v;
      }
      if (i == 0 || sup < inf) inf = sup;
    }
    return inf;
  });
}

SweepResult eval_pucci_sweep(const GridFunction& u, ExtremalSign sign, double sigma, double lambda,
                             double Lambda, const QuadratureScheme& q, Exec exec) {
  return run_sweep(u, exec,
                   [&](int node) { return eval_pucci(u, node, sign, sigma, lambda, Lambda, q); });
}

SweepResult eval_frac_p_sweep(const GridFunction& u, double sigma, double p_exp, double r_p,
                              const QuadratureScheme& q, Exec exec) {
  return run_sweep(u, exec,
                   [&](int node) { return eval_frac_p_laplacian(u, sigma, p_exp, r_p, node, q); });
}

}  // namespace fraclab
