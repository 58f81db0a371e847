#pragma once

#include <span>
#include <vector>

#include "plap/integrate.hpp"

namespace plap {

// Pairwise constraints |v_j - v_i| <= 1 over the support of a kernel; the
// feasible set of the formal p -> infinity limit dynamics. Support edge:
// weight strictly above the threshold (default exactly 0).
class ConstraintSet {
 public:
  static ConstraintSet from_kernel(const KernelMatrix& k,
                                   double support_threshold = 0.0);

  int resolution() const { return mask_.n; }
  const SupportMask& mask() const { return mask_; }
  // Off-diagonal constraint pairs (i < j), the active constraints.
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

 private:
  SupportMask mask_;
  std::vector<std::pair<int, int>> pairs_;
};

// max over support edges of max(0, |v_j - v_i| - 1); zero iff v is feasible.
double sinf_violation(const ConstraintSet& cs, const GridFunction& v);

// Dykstra's cyclic projection onto the intersection of the pairwise
// constraints: each violated pair moves symmetrically toward each other by
// (|d|-1)/2. Returns a point with violation <= tol that is the L^2([0,1])
// projection of v up to tol. Exceeding max_cycles raises a convergence
// error.
GridFunction project_sinf(const ConstraintSet& cs, const GridFunction& v,
                          double tol = 1e-10, long max_cycles = 100000);

// Solution of the limit evolution from a feasible datum: the constant
// trajectory (the normal-cone inclusion admits the stationary solution).
// Infeasible g is an error instructing the caller to project first.
Trajectory limit_trajectory(const ConstraintSet& cs, const GridFunction& g,
                            double horizon_t);

struct PSweepRow {
  double p = 0.0;
  double tau_used = 0.0;
  double sup_deviation = 0.0;
};

// For each exponent p runs implicit Euler with tau_p = min(tau, 1/p^2)
// (vanishing time step before the large-p limit) and records the sup over
// knot times of ||u^p(t) - g||_inf, the distance to the limit trajectory.
// Requires g feasible for the support of k.
std::vector<PSweepRow> p_sweep(const KernelMatrix& k, const GridFunction& g,
                               std::span<const double> p_list,
                               double horizon_t, double tau);

}  // namespace plap
