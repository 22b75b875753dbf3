#include "fraclab/fixtures.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

GridFunction fx_zero(const Grid& g) {
  GridFunction u = GridFunction::constant(g, 0.0);
  u.exterior = ExteriorExtension::zero();
  return u;
}

GridFunction fx_constant(const Grid& g, double c) { return GridFunction::constant(g, c); }

GridFunction fx_affine(const Grid& g, double a, double b) {
  return GridFunction::from_callable(
      g, [a, b](double x) { return a + b * x; }, ExteriorExtension::affine(a, b));
}

GridFunction fx_cosine(const Grid& g) {
  auto f = [](double x) { return std::cos(x); };
  return GridFunction::from_callable(g, f, ExteriorExtension::callable(f, 0.0, true));
}

GridFunction fx_gaussian(const Grid& g) {
  auto f = [](double x) { return std::exp(-x * x); };
  return GridFunction::from_callable(g, f, ExteriorExtension::callable(f, 0.0, false));
}

GridFunction fx_abs_power(const Grid& g, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("fx_abs_power: beta must be >= 0");
  auto f = [beta](double x) { return std::pow(std::fabs(x), beta); };
  return GridFunction::from_callable(g, f, ExteriorExtension::power(1.0, beta));
}

GridFunction fx_odd_kink(const Grid& g) {
  auto f = [](double x) {
    if (x <= -1.0) return x + 1.0;
    if (x >= 1.0) return x - 1.0;
    return 0.0;
  };
  return GridFunction::from_callable(g, f, ExteriorExtension::callable(f, 1.0, false));
}

GridFunction fx_quadratic_splice(const Grid& g, double c2, double splice_radius) {
  if (!(splice_radius > 0.0))
    throw std::invalid_argument("fx_quadratic_splice: splice radius must be positive");
  const double s = splice_radius;
  auto f = [c2, s](double x) {
    if (std::fabs(x) <= s) return c2 * x * x;
    // tangent line at the splice point
    double sign = x > 0.0 ? 1.0 : -1.0;
    return c2 * s * s + 2.0 * c2 * s * (sign * x - s);
  };
  return GridFunction::from_callable(g, f, ExteriorExtension::callable(f, 1.0, false));
}

namespace {

// quintic smoothstep: 0 at 0, 1 at 1, C^2 at both ends
double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

}  // namespace

ComparisonPair fx_comparison_pair(const Grid& g, double bump_amp, double bump_width) {
  auto vfn = [](double x) { return smoothstep5(std::fabs(x) - 1.0); };
  auto eta = [bump_amp, bump_width](double x) {
    double t = x / bump_width;
    if (std::fabs(t) >= 1.0) return 0.0;
    double q = 1.0 - t * t;
    return bump_amp * q * q * q;  // C^2 with vanishing first and second derivatives at the edge
  };
  ComparisonPair pair;
  pair.bump_amp = bump_amp;
  pair.bump_width = bump_width;
  pair.v = GridFunction::from_callable(g, vfn, ExteriorExtension::constant(1.0));
  pair.u = GridFunction::from_callable(
      g, [&](double x) { return vfn(x) + eta(x); }, ExteriorExtension::constant(1.0));
  return pair;
}

namespace {

std::vector<double> parse_args(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      out.push_back(std::stod(tok));
    } catch (...) {
      throw std::invalid_argument("bad numeric argument '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

GridFunction fx_named(const std::string& name, const Grid& g) {
  auto colon = name.find(':');
  std::string head = name.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (head == "zero") return fx_zero(g);
  if (head == "one") return fx_constant(g, 1.0);
  if (head == "cos") return fx_cosine(g);
  if (head == "gaussian") return fx_gaussian(g);
  if (head == "kink") return fx_odd_kink(g);
  if (head == "const") {
    auto a = parse_args(args);
    if (a.size() != 1) throw std::invalid_argument("const:V expects one argument");
    return fx_constant(g, a[0]);
  }
  if (head == "abspow") {
    auto a = parse_args(args);
    if (a.size() != 1) throw std::invalid_argument("abspow:BETA expects one argument");
    return fx_abs_power(g, a[0]);
  }
  if (head == "affine") {
    auto a = parse_args(args);
    if (a.size() != 2) throw std::invalid_argument("affine:A,B expects two arguments");
    return fx_affine(g, a[0], a[1]);
  }
  if (head == "quadratic") {
    auto a = parse_args(args);
    if (a.size() != 2) throw std::invalid_argument("quadratic:C2,RADIUS expects two arguments");
    return fx_quadratic_splice(g, a[0], a[1]);
  }
  throw std::invalid_argument("unknown function '" + name + "'");
}

}  // namespace fraclab
