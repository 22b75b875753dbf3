#pragma once

#include <functional>
#include <vector>

namespace fraclab {

// Uniform symmetric grid on [-R, R] with spacing h; 0 is always a node.
// Node i = 0..2*n_side sits at x = (i - n_side) h.
struct Grid {
  double R = 4.0;
  double h = 1.0 / 512.0;
  int n_side = 2048;

  static Grid make(double R, double h);

  int size() const { return 2 * n_side + 1; }
  double node(int i) const { return (i - n_side) * h; }
  // centered index ic = i - n_side, so x = ic * h
  double centered(long ic) const { return static_cast<double>(ic) * h; }
  int index_of(double x) const;  // nearest node, clamped to the grid
  bool same_layout(const Grid& o) const { return n_side == o.n_side && h == o.h; }
};

// Behavior of a grid function on |x| > R.  The declarative tags serialize;
// `callable` is for analytic test fixtures and cannot be serialized.
struct ExteriorExtension {
  enum class Tag { zero, constant, affine, power, callable };
  Tag tag = Tag::zero;
  double a = 0.0;  // constant c; affine intercept; power scale s
  double b = 0.0;  // affine slope; power exponent beta
  std::function<double(double)> fn;
  double callable_growth = 0.0;  // |fn(x)| = O(|x|^growth) as |x| -> inf
  bool oscillatory = false;      // bounded with O(1)-period sign changes (cosine fixture)

  static ExteriorExtension zero();
  static ExteriorExtension constant(double c);
  static ExteriorExtension affine(double a, double b);
  static ExteriorExtension power(double s, double beta);
  static ExteriorExtension callable(std::function<double(double)> f, double growth,
                                    bool oscillatory = false);

  double operator()(double x) const;
  // Growth exponent governing tail integrability (0 for bounded tags).
  double growth_exponent() const;
  bool serializable() const { return tag != Tag::callable; }
};

struct GridFunction {
  Grid grid;
  std::vector<double> values;
  ExteriorExtension exterior;

  static GridFunction constant(const Grid& g, double c);
  static GridFunction from_callable(const Grid& g, const std::function<double(double)>& f,
                                    ExteriorExtension ext);

  double at_node(int i) const { return values[static_cast<std::size_t>(i)]; }
  // Value at the lattice point ic*h for any centered index, using the grid
  // values inside [-R, R] and the exterior extension beyond.
  double lattice(long ic) const;
};

GridFunction scale(const GridFunction& u, double c);

struct NodeRange {
  int lo = 0, hi = -1;
  bool empty() const { return lo > hi; }
  int count() const { return empty() ? 0 : hi - lo + 1; }
};
// Closed node-snapped ball: nodes with |x - center| <= r (tolerance ~1e-9 h).
NodeRange nodes_in_ball(const Grid& g, double center, double r);

// Weighted L1 tail norm: integral of |u(y)| (1+|y|)^{-(1+sigma)} over the line,
// trapezoid on the grid plus an adaptive integral of the exterior extension.
double tail_norm(const GridFunction& u, double sigma);

// max - min of u over grid nodes in the closed ball.
double oscillation(const GridFunction& u, double center, double r);

// sup over node pairs x != y in the ball of |u(x)-u(y)| / |x-y|^alpha.
double holder_seminorm(const GridFunction& u, double alpha, double center, double r);

// Sup-norm (Chebyshev) best affine fit a + p (x - center) over nodes in the
// ball; dev is the attained sup deviation.
struct AffineFit {
  double a = 0.0;
  double p = 0.0;
  double dev = 0.0;
};
AffineFit best_affine_fit(const GridFunction& u, double center, double r);

}  // namespace fraclab
