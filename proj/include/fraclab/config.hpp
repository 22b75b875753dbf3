#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/kernels.hpp"

namespace fraclab {

// Configuration error anchored to a file line; the CLI maps it to exit 2.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& where, int line, const std::string& msg)
      : std::runtime_error(line > 0 ? where + ":" + std::to_string(line) + ": " + msg
                                    : where + ": " + msg) {}
};

// Flat INI: [section] headers, key = value lines, # or ; comments.
class IniFile {
 public:
  static IniFile parse_file(const std::string& path);
  static IniFile parse_string(const std::string& text, const std::string& name = "<config>");

  bool has(const std::string& sec, const std::string& key) const;
  std::string get(const std::string& sec, const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& sec, const std::string& key, double fallback) const;
  int get_int(const std::string& sec, const std::string& key, int fallback) const;
  std::vector<double> get_list(const std::string& sec, const std::string& key,
                               const std::vector<double>& fallback) const;
  int line_of(const std::string& sec, const std::string& key) const;
  const std::string& name() const { return name_; }

  [[noreturn]] void fail(const std::string& sec, const std::string& key,
                         const std::string& msg) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string name_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

// Kernel family declaration: fraclap | band(lambda,Lambda,seed) |
// perturbed(k,omega_exponent); rows x cols entries derive per-entry seeds.
IsaacsOperator make_family(const std::string& family, double sigma, int rows, int cols);

struct ProbeConfig {
  std::string function = "abspow:1.4";
  double center = 0.0;
  std::vector<double> scales = {0.4, 0.2, 0.1, 0.05};
  double rho = 0.5;
  int depth = 6;
  double alpha = 0.4;
  double C_bound = 10.0;
};

struct EvalConfig {
  std::string function = "cos";
  std::string op = "linear";  // linear | isaacs | pucci_plus | pucci_minus | fracp
  double p_exp = 3.0;
  double r_p = 0.0;
};

struct CounterexampleConfig {
  std::vector<double> dists = {0.2, 0.1, 0.05, 0.025};
};

// Typed view of the whole experiment file with ranges validated up front.
struct ExperimentConfig {
  Grid grid;
  double sigma = 1.5;
  std::string family = "fraclap";
  int rows = 1, cols = 1;

  double gamma = 0.0;
  double shift_p = 0.0;
  std::string f_spec = "zero";
  std::string exterior_spec = "zero";

  std::vector<double> epsilons = {0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};
  double tol = 1e-6;
  double cfl = 0.45;
  int max_iters = 50000;

  ProbeConfig probe;
  EvalConfig eval;
  CounterexampleConfig counterexample;

  static ExperimentConfig defaults();
  static ExperimentConfig from_ini(const IniFile& ini);

  IsaacsOperator build_operator() const;
  ExteriorExtension build_exterior() const;
  std::function<double(double)> build_rhs() const;
  // One-line resolved summary embedded as the first comment of every CSV.
  std::string summary(const std::string& command) const;
};

ExteriorExtension parse_exterior(const std::string& spec);
std::function<double(double)> parse_rhs(const std::string& spec);

}  // namespace fraclab
