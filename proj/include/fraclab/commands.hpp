#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fraclab/config.hpp"
#include "fraclab/nonlocal_ops.hpp"

namespace fraclab {

// exit codes: 0 success, 1 fixture/acceptance failure, 2 config error,
// 3 solver non-convergence
inline constexpr int kExitOk = 0;
inline constexpr int kExitFixtureFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoConverge = 3;

struct CommandOptions {
  std::string out_dir = ".";
  Exec exec = Exec::parallel;
  double inject_c_scale = 1.0;  // validate-only fault injection on the kernel scale
};

int run_solve(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);
int run_eval(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);
int run_probe(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);
int run_counterexample(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);
int run_validate(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);

// Full CLI dispatch (argv without the program name); used by main and tests.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fraclab
