#pragma once

#include <span>
#include <vector>

#include "plap/plaplacian.hpp"

namespace plap {

enum class Scheme { Forward, Backward };

enum class StepMode { FixedTau, AdaptiveAlpha };

// Time-step policy for the explicit scheme. Fixed mode uses constant tau
// (clamped on the last step to land exactly on the horizon). Adaptive mode
// uses tau_h = alpha / max(||Lp u^(h-1)||_2, 1) with the constant
// alpha = eps / (N+1)^(1/2+nu), nu in ]0,1/2[, where N is the smallest step
// count whose ideal budget N*alpha covers the horizon.
struct StepSchedule {
  StepMode mode = StepMode::FixedTau;
  double tau = 0.0;        // fixed mode
  double alpha_eps = 0.0;  // adaptive mode
  double alpha_nu = 0.0;   // adaptive mode, in ]0, 1/2[
  double horizon_t = 0.0;
  long max_steps = 200000;

  static StepSchedule fixed(double tau, double horizon_t,
                            long max_steps = 200000);
  static StepSchedule adaptive(double alpha_eps, double alpha_nu,
                               double horizon_t, long max_steps = 200000);
  void validate() const;
};

struct StepStat {
  int iterations = 0;     // inner-solve iterations (backward scheme)
  double residual = 0.0;  // final inner residual, L^2 grid norm
};

// Knots of a time discretization: times[0] = 0 and states[0] = initial
// datum. truncated() is set when max_steps ran out before the horizon.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<double> times, std::vector<GridFunction> states,
             double p, Scheme scheme, bool truncated = false,
             std::vector<StepStat> stats = {});

  long knots() const { return static_cast<long>(times_.size()); }
  double time(long h) const { return times_[static_cast<std::size_t>(h)]; }
  const GridFunction& state(long h) const {
    return states_[static_cast<std::size_t>(h)];
  }
  const std::vector<double>& times() const { return times_; }
  const std::vector<GridFunction>& states() const { return states_; }
  double final_time() const { return times_.back(); }
  int resolution() const { return states_.front().size(); }
  double p() const { return p_; }
  Scheme scheme() const { return scheme_; }
  bool truncated() const { return truncated_; }
  const std::vector<StepStat>& step_stats() const { return stats_; }

 private:
  std::vector<double> times_;
  std::vector<GridFunction> states_;
  double p_ = 2.0;
  Scheme scheme_ = Scheme::Forward;
  bool truncated_ = false;
  std::vector<StepStat> stats_;
};

// Explicit Euler for u' = -Lp u. Fixed mode checks each step for finiteness
// and for an energy increase beyond 10x (stability error naming the step);
// adaptive mode checks finiteness only, since its step rule is a subgradient
// schedule that need not be monotone.
Trajectory forward_euler(const KernelMatrix& k, const GridFunction& g,
                         PExponent p, const StepSchedule& schedule);

// Implicit Euler: each step minimizes
//   Phi(v) = 1/2 <v - u, v - u> + tau F(v)
// (<.,.> the L^2 grid pairing) by a damped semismooth Newton iteration on
// the optimality system v - u + tau Lp v = 0 (dense Cholesky of the
// generalized Hessian, which is SPD with eigenvalues >= 1), warm-started at
// the prox center u and stopping when ||v - u + tau Lp v||_2 <= inner_tol.
// For p < 2 the minimizer can hold coordinates in exact consensus, so near
// convergence sub-ulp gaps are snapped to exact ties when that does not
// worsen the residual. inner_tol <= 0 selects the default
// 1e-10 * max(1, ||u||_2). Exceeding the iteration cap raises a convergence
// error carrying the last residual. Descent from the prox center keeps the
// energy nonincreasing along the returned knots up to round-off.
Trajectory backward_euler(const KernelMatrix& k, const GridFunction& g,
                          PExponent p, double tau, double horizon_t,
                          double inner_tol = -1.0, long max_inner = 10000);

// Piecewise-linear interpolant through the knots; t = 0 gives the initial
// datum, t outside [0, final] (beyond a 1e-9 relative slack) is a domain
// error.
GridFunction interpolate_linear(const Trajectory& traj, double t);

// Piecewise-constant interpolant on ]t_{h-1}, t_h]: the left knot for the
// forward scheme, the right knot for the backward scheme. Requires
// 0 < t <= final time.
GridFunction interpolate_constant(const Trajectory& traj, double t);

// max over probe times (each in ]0, final]) of the L^q distance between the
// two interpolants; O(tau) for either scheme.
double interpolant_gap(const Trajectory& traj, double q,
                       std::span<const double> probes);

}  // namespace plap
