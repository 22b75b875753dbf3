// Benchmark: OpenMP node-parallel operator sweeps and solver marching
// against the serial reference path, asserting byte-identical results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "fraclab/config.hpp"
#include "fraclab/fixtures.hpp"
#include "fraclab/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fraclab;
using Clock = std::chrono::steady_clock;

int main(int argc, char** argv) {
  double h_inv = 128.0;
  int reps = 5;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--n" && i + 1 < argc) h_inv = std::atof(argv[++i]);
    if (a == "--reps" && i + 1 < argc) reps = std::atoi(argv[++i]);
  }
  Grid g = Grid::make(4.0, 1.0 / h_inv);
  GridFunction u = GridFunction::from_callable(
      g, [](double x) { return std::exp(-4.0 * x * x); }, ExteriorExtension::zero());
  IsaacsOperator op = make_family("band(1,2,42)", 1.5, 2, 2);

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("grid h = 1/%.0f (%d nodes), 2x2 band family, %d reps, %d threads\n", h_inv,
              g.size(), reps, threads);

  // operator sweep over all quadrature-valid nodes
  auto time_sweep = [&](Exec exec) {
    SweepResult r;
    auto t0 = Clock::now();
    for (int k = 0; k < reps; ++k) r = eval_isaacs_sweep(u, op, {}, exec);
    return std::make_pair(std::chrono::duration<double>(Clock::now() - t0).count() / reps, r);
  };
  auto [ts, rs] = time_sweep(Exec::serial);
  auto [tp, rp] = time_sweep(Exec::parallel);
  bool sweep_same = rs.values.size() == rp.values.size() &&
                    std::memcmp(rs.values.data(), rp.values.data(),
                                rs.values.size() * sizeof(double)) == 0;
  std::printf("isaacs sweep   serial: %8.2f ms   openmp: %8.2f ms   speedup %.2fx   identical: %s\n",
              1e3 * ts, 1e3 * tp, ts / tp, sweep_same ? "yes" : "NO");

  // solver marching, workspace amortized over iterations
  ProblemSpec prob;
  prob.gamma = 1.0;
  prob.op = op;
  prob.rhs = [](double) { return 1.0; };
  prob.data = fx_zero(g);
  const int iters = 200;
  auto time_march = [&](Exec exec) {
    SolveConfig cfg;
    cfg.epsilon_schedule = {0.1};
    cfg.tol_residual = 1e-300;  // run exactly max_iters steps
    cfg.max_iters = iters;
    cfg.exec = exec;
    auto t0 = Clock::now();
    ViscousResult res = solve_viscous(prob, 0.1, cfg);
    return std::make_pair(std::chrono::duration<double>(Clock::now() - t0).count(),
                          std::move(res.u.values));
  };
  auto [ms, us] = time_march(Exec::serial);
  auto [mp, upar] = time_march(Exec::parallel);
  bool march_same = us.size() == upar.size() &&
                    std::memcmp(us.data(), upar.data(), us.size() * sizeof(double)) == 0;
  std::printf("march %4d its serial: %8.2f ms   openmp: %8.2f ms   speedup %.2fx   identical: %s\n",
              iters, 1e3 * ms, 1e3 * mp, ms / mp, march_same ? "yes" : "NO");

  return sweep_same && march_same ? 0 : 1;
}
