#include "fraclab/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fraclab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '#' || s[i] == ';') return s.substr(0, i);
  }
  return s;
}

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"grid", {"R", "h"}},
    {"operator", {"sigma", "family", "rows", "cols"}},
    {"problem", {"gamma", "p", "f", "exterior"}},
    {"solver", {"epsilons", "tol", "cfl", "max_iters"}},
    {"probe", {"function", "center", "scales", "rho", "depth", "alpha", "C"}},
    {"eval", {"function", "op", "p_exp", "r_p"}},
    {"counterexample", {"dists"}},
};

}  // namespace

IniFile IniFile::parse_string(const std::string& text, const std::string& name) {
  IniFile ini;
  ini.name_ = name;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(name, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (kKnownKeys.find(section) == kKnownKeys.end())
        throw ConfigError(name, line, "unknown section [" + section + "]");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name, line, "expected 'key = value' or a section header");
    if (section.empty()) throw ConfigError(name, line, "key outside any section");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    const auto& known = kKnownKeys.at(section);
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) throw ConfigError(name, line, "unknown key '" + key + "' in [" + section + "]");
    ini.sections_[section][key] = Entry{value, line};
  }
  return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

bool IniFile::has(const std::string& sec, const std::string& key) const {
  auto s = sections_.find(sec);
  return s != sections_.end() && s->second.find(key) != s->second.end();
}

std::string IniFile::get(const std::string& sec, const std::string& key,
                         const std::string& fallback) const {
  auto s = sections_.find(sec);
  if (s == sections_.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second.value;
}

int IniFile::line_of(const std::string& sec, const std::string& key) const {
  auto s = sections_.find(sec);
  if (s == sections_.end()) return 0;
  auto k = s->second.find(key);
  return k == s->second.end() ? 0 : k->second.line;
}

void IniFile::fail(const std::string& sec, const std::string& key, const std::string& msg) const {
  throw ConfigError(name_, line_of(sec, key), msg);
}

double IniFile::get_num(const std::string& sec, const std::string& key, double fallback) const {
  if (!has(sec, key)) return fallback;
  const std::string v = get(sec, key, "");
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    fail(sec, key, "expected a number, got '" + v + "'");
  }
}

int IniFile::get_int(const std::string& sec, const std::string& key, int fallback) const {
  double x = get_num(sec, key, fallback);
  int i = static_cast<int>(std::lround(x));
  if (x != static_cast<double>(i)) fail(sec, key, "expected an integer");
  return i;
}

std::vector<double> IniFile::get_list(const std::string& sec, const std::string& key,
                                      const std::vector<double>& fallback) const {
  if (!has(sec, key)) return fallback;
  const std::string v = get(sec, key, "");
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    auto comma = v.find(',', pos);
    std::string tok = trim(v.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (!tok.empty()) {
      try {
        out.push_back(std::stod(tok));
      } catch (...) {
        fail(sec, key, "expected a comma-separated number list");
      }
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) fail(sec, key, "empty list");
  return out;
}

namespace {

struct FamilyDecl {
  std::string head;
  std::vector<double> args;
};

FamilyDecl parse_family_decl(const std::string& s) {
  FamilyDecl d;
  auto open = s.find('(');
  if (open == std::string::npos) {
    d.head = trim(s);
    return d;
  }
  if (s.back() != ')') throw std::invalid_argument("malformed family '" + s + "'");
  d.head = trim(s.substr(0, open));
  std::string args = s.substr(open + 1, s.size() - open - 2);
  std::size_t pos = 0;
  while (pos <= args.size()) {
    auto comma = args.find(',', pos);
    std::string tok =
        trim(args.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (!tok.empty()) d.args.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return d;
}

}  // namespace

IsaacsOperator make_family(const std::string& family, double sigma, int rows, int cols) {
  FamilyDecl d = parse_family_decl(family);
  std::vector<KernelSpec> kernels;
  if (d.head == "fraclap") {
    if (rows != 1 || cols != 1)
      throw std::invalid_argument("fraclap family is a single kernel (rows = cols = 1)");
    kernels.push_back(make_frac_laplacian(sigma));
    return make_isaacs(std::move(kernels), 1, 1);
  }
  if (d.head == "band") {
    if (d.args.size() != 3) throw std::invalid_argument("band(lambda,Lambda,seed) expects 3 args");
    double lam = d.args[0], Lam = d.args[1];
    auto seed = static_cast<std::uint64_t>(d.args[2]);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        std::uint64_t s = seed * 1000003ull + static_cast<std::uint64_t>(i) * 131ull +
                          static_cast<std::uint64_t>(j);
        kernels.push_back(make_band_kernel(sigma, lam, Lam, s));
      }
    return make_isaacs(std::move(kernels), rows, cols);
  }
  if (d.head == "perturbed") {
    if (d.args.size() != 2)
      throw std::invalid_argument("perturbed(k,omega_exponent) expects 2 args");
    for (int i = 0; i < rows * cols; ++i)
      kernels.push_back(make_perturbed_kernel(sigma, d.args[0], d.args[1]));
    return make_isaacs(std::move(kernels), rows, cols);
  }
  throw std::invalid_argument("unknown kernel family '" + family + "'");
}

ExteriorExtension parse_exterior(const std::string& spec) {
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto nums = [&args]() {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= args.size()) {
      auto comma = args.find(',', pos);
      std::string tok = args.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!trim(tok).empty()) out.push_back(std::stod(trim(tok)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  };
  if (head == "zero") return ExteriorExtension::zero();
  if (head == "const") {
    auto a = nums();
    if (a.size() != 1) throw std::invalid_argument("exterior const:C expects one argument");
    return ExteriorExtension::constant(a[0]);
  }
  if (head == "affine") {
    auto a = nums();
    if (a.size() != 2) throw std::invalid_argument("exterior affine:A,B expects two arguments");
    return ExteriorExtension::affine(a[0], a[1]);
  }
  if (head == "power") {
    auto a = nums();
    if (a.size() != 2) throw std::invalid_argument("exterior power:S,BETA expects two arguments");
    return ExteriorExtension::power(a[0], a[1]);
  }
  throw std::invalid_argument("unknown exterior '" + spec + "'");
}

std::function<double(double)> parse_rhs(const std::string& spec) {
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  if (head == "zero") return {};
  if (head == "one") return [](double) { return 1.0; };
  if (head == "const") {
    double c = std::stod(spec.substr(colon + 1));
    return [c](double) { return c; };
  }
  throw std::invalid_argument("unknown rhs '" + spec + "' (zero | one | const:V)");
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig cfg;
  cfg.grid = Grid::make(4.0, 1.0 / 512.0);
  return cfg;
}

ExperimentConfig ExperimentConfig::from_ini(const IniFile& ini) {
  ExperimentConfig cfg = defaults();
  double R = ini.get_num("grid", "R", cfg.grid.R);
  double h = ini.get_num("grid", "h", cfg.grid.h);
  try {
    cfg.grid = Grid::make(R, h);
  } catch (const std::exception& e) {
    throw ConfigError(ini.name(), ini.line_of("grid", "R"), e.what());
  }

  cfg.sigma = ini.get_num("operator", "sigma", cfg.sigma);
  if (!(cfg.sigma > 0.0 && cfg.sigma < 2.0)) ini.fail("operator", "sigma", "sigma must lie in (0,2)");
  cfg.family = ini.get("operator", "family", cfg.family);
  cfg.rows = ini.get_int("operator", "rows", cfg.rows);
  cfg.cols = ini.get_int("operator", "cols", cfg.cols);
  if (cfg.rows < 1 || cfg.cols < 1) ini.fail("operator", "rows", "rows/cols must be >= 1");
  try {
    (void)make_family(cfg.family, cfg.sigma, cfg.rows, cfg.cols);
  } catch (const std::exception& e) {
    throw ConfigError(ini.name(), ini.line_of("operator", "family"), e.what());
  }

  cfg.gamma = ini.get_num("problem", "gamma", cfg.gamma);
  if (!(cfg.gamma >= 0.0)) ini.fail("problem", "gamma", "gamma must be >= 0");
  cfg.shift_p = ini.get_num("problem", "p", cfg.shift_p);
  cfg.f_spec = ini.get("problem", "f", cfg.f_spec);
  cfg.exterior_spec = ini.get("problem", "exterior", cfg.exterior_spec);
  try {
    (void)parse_rhs(cfg.f_spec);
  } catch (const std::exception& e) {
    throw ConfigError(ini.name(), ini.line_of("problem", "f"), e.what());
  }
  try {
    ExteriorExtension ext = parse_exterior(cfg.exterior_spec);
    if (!(ext.growth_exponent() < cfg.sigma))
      ini.fail("problem", "exterior", "exterior not in L1_sigma (growth >= sigma)");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(ini.name(), ini.line_of("problem", "exterior"), e.what());
  }

  cfg.epsilons = ini.get_list("solver", "epsilons", cfg.epsilons);
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    if (!(cfg.epsilons[i] > 0.0)) ini.fail("solver", "epsilons", "epsilons must be positive");
    if (i > 0 && !(cfg.epsilons[i] < cfg.epsilons[i - 1]))
      ini.fail("solver", "epsilons", "epsilons must be strictly decreasing");
  }
  cfg.tol = ini.get_num("solver", "tol", cfg.tol);
  if (!(cfg.tol > 0.0)) ini.fail("solver", "tol", "tol must be positive");
  cfg.cfl = ini.get_num("solver", "cfl", cfg.cfl);
  if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0)) ini.fail("solver", "cfl", "cfl must lie in (0,1)");
  cfg.max_iters = ini.get_int("solver", "max_iters", cfg.max_iters);
  if (cfg.max_iters < 1) ini.fail("solver", "max_iters", "max_iters must be >= 1");

  cfg.probe.function = ini.get("probe", "function", cfg.probe.function);
  cfg.probe.center = ini.get_num("probe", "center", cfg.probe.center);
  cfg.probe.scales = ini.get_list("probe", "scales", cfg.probe.scales);
  for (std::size_t i = 1; i < cfg.probe.scales.size(); ++i)
    if (!(cfg.probe.scales[i] < cfg.probe.scales[i - 1]))
      ini.fail("probe", "scales", "scales must be strictly decreasing");
  cfg.probe.rho = ini.get_num("probe", "rho", cfg.probe.rho);
  if (!(cfg.probe.rho > 0.0 && cfg.probe.rho < 1.0))
    ini.fail("probe", "rho", "rho must lie in (0,1)");
  cfg.probe.depth = ini.get_int("probe", "depth", cfg.probe.depth);
  cfg.probe.alpha = ini.get_num("probe", "alpha", cfg.probe.alpha);
  if (!(cfg.probe.alpha > 0.0 && cfg.probe.alpha <= 1.0))
    ini.fail("probe", "alpha", "alpha must lie in (0,1]");
  cfg.probe.C_bound = ini.get_num("probe", "C", cfg.probe.C_bound);
  if (!(cfg.probe.C_bound >= 0.0)) ini.fail("probe", "C", "C must be >= 0");

  cfg.eval.function = ini.get("eval", "function", cfg.eval.function);
  cfg.eval.op = ini.get("eval", "op", cfg.eval.op);
  cfg.eval.p_exp = ini.get_num("eval", "p_exp", cfg.eval.p_exp);
  cfg.eval.r_p = ini.get_num("eval", "r_p", cfg.eval.r_p);
  if (cfg.eval.op == "fracp") {
    if (!(cfg.eval.p_exp > 2.0)) ini.fail("eval", "p_exp", "p_exp must exceed 2");
    if (!(cfg.eval.r_p >= 0.0)) ini.fail("eval", "r_p", "r_p must be >= 0");
  }

  cfg.counterexample.dists = ini.get_list("counterexample", "dists", cfg.counterexample.dists);
  for (double d : cfg.counterexample.dists)
    if (!(d > 0.0 && d < 1.0)) ini.fail("counterexample", "dists", "dists must lie in (0,1)");
  return cfg;
}

IsaacsOperator ExperimentConfig::build_operator() const {
  return make_family(family, sigma, rows, cols);
}

ExteriorExtension ExperimentConfig::build_exterior() const { return parse_exterior(exterior_spec); }

std::function<double(double)> ExperimentConfig::build_rhs() const { return parse_rhs(f_spec); }

std::string ExperimentConfig::summary(const std::string& command) const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "command=%s R=%.17g h=%.17g sigma=%.17g family=%s rows=%d cols=%d gamma=%.17g "
                "p=%.17g f=%s exterior=%s",
                command.c_str(), grid.R, grid.h, sigma, family.c_str(), rows, cols, gamma,
                shift_p, f_spec.c_str(), exterior_spec.c_str());
  return buf;
}

}  // namespace fraclab
