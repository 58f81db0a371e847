#pragma once

#include "plap/grid.hpp"
#include "plap/kernel.hpp"

namespace plap {

// Validated exponent: strictly 1 < p < infinity.
class PExponent {
 public:
  explicit PExponent(double p);
  double value() const { return p_; }

 private:
  double p_;
};

// phi(t) = |t|^(p-2) t with phi(0) := 0, which also covers 1 < p < 2 where
// the formula is singular at the origin.
double phi_power(double t, double p);

// |t|^p, with fast paths for the common exponents.
double abs_power(double t, double p);

// Discrete nonlocal p-Laplacian,
//   (Lp u)_i = -(1/n) sum_j k(i,j) phi(u_j - u_i).
// The evolution problem integrated elsewhere is u' = -Lp u. Requires
// matching sizes.
GridFunction apply_plaplacian(const KernelMatrix& k, const GridFunction& u,
                              PExponent p);

// Discrete p-Dirichlet energy,
//   F(u) = 1/(2 p n^2) sum_{i,j} k(i,j) |u_j - u_i|^p,
// whose L^2([0,1]) gradient is Lp u (equivalently n * dF/du_i = (Lp u)_i).
double energy(const KernelMatrix& k, const GridFunction& u, PExponent p);

}  // namespace plap
