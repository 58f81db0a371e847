#pragma once

#include <vector>

#include "plap/errors.hpp"

namespace plap {

// Values on the uniform n-cell grid over [0,1], identified with the piecewise
// constant function equal to v[i] on cell i = [i/n, (i+1)/n[. Norms and inner
// products carry the 1/n cell weight, so a GridFunction is literally an
// element of L^q([0,1]) and refinement is norm-preserving.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(int n, double value = 0.0);
  explicit GridFunction(std::vector<double> values);

  int size() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return v_; }

  bool all_finite() const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double scale);

 private:
  std::vector<double> v_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double scale, GridFunction a);

// L^q([0,1]) norm of the embedded function: ((1/n) sum |u_i|^q)^(1/q), max
// for q = infinity. q < 1 is a domain error.
double grid_norm(const GridFunction& u, double q);

// L^2([0,1]) inner product, (1/n) sum u_i v_i.
double pairing(const GridFunction& u, const GridFunction& v);

// Each value repeated `factor` times; embeds the same L^q element on the
// finer grid. factor >= 1.
GridFunction refine(const GridFunction& u, int factor);

double mean(const GridFunction& u);

// First-order L^q modulus of smoothness over grid shifts: the sup over
// nonzero shifts z = k/n with |z| < h of the L^q norm of u(.+z) - u(.)
// restricted to the overlap. h < 1/n is a resolution error; when the open
// interval ]0,h[ contains no grid shift (h == 1/n) the single-cell shift is
// used.
double modulus_smoothness(const GridFunction& u, double h, double q);

}  // namespace plap
