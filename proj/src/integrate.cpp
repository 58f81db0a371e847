#include "plap/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "plap/util.hpp"

namespace plap {

StepSchedule StepSchedule::fixed(double tau, double horizon_t,
                                 long max_steps) {
  StepSchedule s;
  s.mode = StepMode::FixedTau;
  s.tau = tau;
  s.horizon_t = horizon_t;
  s.max_steps = max_steps;
  s.validate();
  return s;
}

StepSchedule StepSchedule::adaptive(double alpha_eps, double alpha_nu,
                                    double horizon_t, long max_steps) {
  StepSchedule s;
  s.mode = StepMode::AdaptiveAlpha;
  s.alpha_eps = alpha_eps;
  s.alpha_nu = alpha_nu;
  s.horizon_t = horizon_t;
  s.max_steps = max_steps;
  s.validate();
  return s;
}

void StepSchedule::validate() const {
  if (!(horizon_t > 0.0) || !std::isfinite(horizon_t)) {
    fail(ErrorCode::Validation, "schedule: horizon must be positive and finite");
  }
  if (max_steps < 1) {
    fail(ErrorCode::Validation, "schedule: max_steps must be >= 1");
  }
  if (mode == StepMode::FixedTau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      fail(ErrorCode::Validation, "schedule: tau must be positive and finite");
    }
  } else {
    if (!(alpha_eps > 0.0) || !std::isfinite(alpha_eps)) {
      fail(ErrorCode::Validation,
           "schedule: alpha_eps must be positive and finite");
    }
    if (!(alpha_nu > 0.0 && alpha_nu < 0.5)) {
      fail(ErrorCode::Validation, "schedule: alpha_nu must lie in ]0, 1/2[");
    }
  }
}

Trajectory::Trajectory(std::vector<double> times,
                       std::vector<GridFunction> states, double p,
                       Scheme scheme, bool truncated,
                       std::vector<StepStat> stats)
    : times_(std::move(times)),
      states_(std::move(states)),
      p_(p),
      scheme_(scheme),
      truncated_(truncated),
      stats_(std::move(stats)) {
  if (times_.empty() || times_.size() != states_.size()) {
    fail(ErrorCode::InvalidArgument,
         "trajectory needs matching, non-empty knot times and states");
  }
}

namespace {

void check_initial(const KernelMatrix& k, const GridFunction& g) {
  if (k.size() != g.size()) {
    fail(ErrorCode::Dimension,
         "integrator: kernel resolution " + std::to_string(k.size()) +
             " does not match initial datum size " + std::to_string(g.size()));
  }
  if (!g.all_finite()) {
    fail(ErrorCode::InvalidArgument, "integrator: initial datum must be finite");
  }
}

// Smallest N with N * alpha(N) >= T, alpha(N) = eps/(N+1)^(1/2+nu). The
// left side is increasing in N, so a doubling scan plus binary search works.
long adaptive_step_budget(double eps, double nu, double horizon_t,
                          long max_steps) {
  const auto budget = [&](long n) {
    return n * eps / std::pow(static_cast<double>(n) + 1.0, 0.5 + nu);
  };
  if (budget(max_steps) < horizon_t) return max_steps;
  long lo = 1, hi = 1;
  while (budget(hi) < horizon_t) hi = std::min(max_steps, hi * 2);
  while (lo < hi) {
    const long mid = lo + (hi - lo) / 2;
    if (budget(mid) >= horizon_t) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace

Trajectory forward_euler(const KernelMatrix& k, const GridFunction& g,
                         PExponent p, const StepSchedule& schedule) {
  schedule.validate();
  check_initial(k, g);
  const double horizon = schedule.horizon_t;
  const bool fixed = schedule.mode == StepMode::FixedTau;

  double alpha = 0.0;
  if (!fixed) {
    const long n_steps = adaptive_step_budget(
        schedule.alpha_eps, schedule.alpha_nu, horizon, schedule.max_steps);
    alpha = schedule.alpha_eps /
            std::pow(static_cast<double>(n_steps) + 1.0, 0.5 + schedule.alpha_nu);
  }

  std::vector<double> times{0.0};
  std::vector<GridFunction> states{g};
  double prev_energy = fixed ? energy(k, g, p) : 0.0;
  double t = 0.0;
  long h = 0;
  bool truncated = false;
  while (t < horizon) {
    if (h >= schedule.max_steps) {
      truncated = true;
      break;
    }
    ++h;
    const GridFunction& u = states.back();
    GridFunction lap = apply_plaplacian(k, u, p);
    double tau;
    if (fixed) {
      tau = schedule.tau;
    } else {
      tau = alpha / std::max(grid_norm(lap, 2.0), 1.0);
    }
    tau = std::min(tau, horizon - t);  // land exactly on the horizon
    GridFunction next = u - tau * std::move(lap);
    if (!next.all_finite()) {
      fail(ErrorCode::Stability,
           "forward_euler: state became non-finite at step " +
               std::to_string(h));
    }
    if (fixed) {
      const double e = energy(k, next, p);
      if (e > 10.0 * std::max(prev_energy, 1e-300)) {
        fail(ErrorCode::Stability,
             "forward_euler: energy grew more than 10x at step " +
                 std::to_string(h) + " (tau too large for this datum)");
      }
      prev_energy = e;
    }
    t = (horizon - t <= tau) ? horizon : t + tau;
    times.push_back(t);
    states.push_back(std::move(next));
  }
  return Trajectory(std::move(times), std::move(states), p.value(),
                    Scheme::Forward, truncated);
}

namespace {

struct ProxResult {
  GridFunction v;
  StepStat stat;
};

// phi'(t) = (p-1)|t|^(p-2), the divided-difference weight of the linearized
// operator. For p < 2 it blows up at t = 0; the clamp keeps the Newton matrix
// finite, which simply glues near-equal coordinates together.
double dphi_power(double t, double p) {
  const double a = std::abs(t);
  if (p == 2.0) return 1.0;
  if (a == 0.0) return p > 2.0 ? 0.0 : 1e12;
  double w;
  if (p == 3.0) {
    w = a;
  } else if (p == 4.0) {
    w = a * a;
  } else if (p == 1.5) {
    w = 1.0 / std::sqrt(a);
  } else {
    w = std::pow(a, p - 2.0);
  }
  return std::min((p - 1.0) * w, 1e12);
}

// In-place lower Cholesky factorization. The matrices here are I + tau *
// (positive semidefinite), hence uniformly positive definite.
void cholesky_factor(std::vector<double>& a, int n) {
  for (int j = 0; j < n; ++j) {
    double d = a[static_cast<std::size_t>(j) * n + j];
    for (int m = 0; m < j; ++m) {
      const double l = a[static_cast<std::size_t>(j) * n + m];
      d -= l * l;
    }
    if (!(d > 0.0)) {
      fail(ErrorCode::Internal,
           "backward_euler: Newton matrix lost positive definiteness");
    }
    d = std::sqrt(d);
    a[static_cast<std::size_t>(j) * n + j] = d;
    for (int i = j + 1; i < n; ++i) {
      double v = a[static_cast<std::size_t>(i) * n + j];
      for (int m = 0; m < j; ++m) {
        v -= a[static_cast<std::size_t>(i) * n + m] *
             a[static_cast<std::size_t>(j) * n + m];
      }
      a[static_cast<std::size_t>(i) * n + j] = v / d;
    }
  }
}

// Solves L L^T x = b in place.
void cholesky_solve(const std::vector<double>& l, int n,
                    std::vector<double>& b) {
  for (int i = 0; i < n; ++i) {
    double v = b[static_cast<std::size_t>(i)];
    for (int m = 0; m < i; ++m) {
      v -= l[static_cast<std::size_t>(i) * n + m] * b[static_cast<std::size_t>(m)];
    }
    b[static_cast<std::size_t>(i)] = v / l[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double v = b[static_cast<std::size_t>(i)];
    for (int m = i + 1; m < n; ++m) {
      v -= l[static_cast<std::size_t>(m) * n + i] * b[static_cast<std::size_t>(m)];
    }
    b[static_cast<std::size_t>(i)] = v / l[static_cast<std::size_t>(i) * n + i];
  }
}

// For p < 2 the prox minimizer genuinely contains exact ties (|t|^p has a
// vertical tangent at 0, so coordinates stick together), whose residual-free
// representation in doubles is exact equality: a gap of one ulp already
// contributes phi(ulp) ~ 1e-8 to the optimality system. This collapses
// support-coupled coordinates within a few ulps onto their cluster mean.
// Returns true when anything merged.
bool snap_ties(const KernelMatrix& k, GridFunction& v) {
  const int n = v.size();
  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(v[i]));
  const double gap_tol = 16.0 * std::numeric_limits<double>::epsilon() * scale;

  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  const auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  bool merged = false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (k(i, j) > 0.0 && v[i] != v[j] &&
          std::abs(v[i] - v[j]) <= gap_tol) {
        const int ri = find(i), rj = find(j);
        if (ri != rj) {
          parent[static_cast<std::size_t>(rj)] = ri;
          merged = true;
        }
      } else if (k(i, j) > 0.0 && v[i] == v[j]) {
        const int ri = find(i), rj = find(j);
        if (ri != rj) parent[static_cast<std::size_t>(rj)] = ri;
      }
    }
  }
  if (!merged) return false;
  std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
  std::vector<int> count(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    sum[static_cast<std::size_t>(r)] += v[i];
    ++count[static_cast<std::size_t>(r)];
  }
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (count[static_cast<std::size_t>(r)] > 1) {
      v[i] = sum[static_cast<std::size_t>(r)] /
             count[static_cast<std::size_t>(r)];
    }
  }
  return true;
}

// Minimizes Phi(v) = 1/2<v-u, v-u> + tau F(v) by a damped semismooth Newton
// iteration on the optimality system r(v) = v - u + tau Lp v = 0 (r is the
// gradient of Phi in the grid pairing), warm-started at the prox center.
// The generalized Hessian I + (tau/n)(D - C), with C the kernel weighted by
// phi'(gaps), is symmetric positive definite, so each step is one dense
// Cholesky solve; Armijo backtracking on Phi keeps the descent monotone,
// which guarantees F(v) <= F(u) per accepted step (up to the round-off of a
// tie snap in the endgame for p < 2).
ProxResult prox_step(const KernelMatrix& k, const GridFunction& u, PExponent p,
                     double tau, double tol, long max_inner) {
  const int n = u.size();
  const double pv = p.value();
  const auto residual = [&](const GridFunction& v) {
    GridFunction g = apply_plaplacian(k, v, p);
    g *= tau;
    g += v;
    g -= u;
    return g;
  };
  const auto objective = [&](const GridFunction& v) {
    GridFunction d = v - u;
    return 0.5 * pairing(d, d) + tau * energy(k, v, p);
  };

  GridFunction v = u;
  GridFunction r = residual(v);
  double res = grid_norm(r, 2.0);
  if (res <= tol) {
    return {std::move(v), StepStat{0, res}};
  }

  double phi_v = objective(v);
  std::vector<double> jac(static_cast<std::size_t>(n) * n);
  std::vector<double> delta(static_cast<std::size_t>(n));
  for (long iter = 1; iter <= max_inner; ++iter) {
    // Assemble I + (tau/n)(D - C) at the current iterate.
    const double scale = tau / n;
    for (int i = 0; i < n; ++i) {
      double diag = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double c = k(i, j) * dphi_power(v[j] - v[i], pv);
        jac[static_cast<std::size_t>(i) * n + j] = -scale * c;
        diag += c;
      }
      jac[static_cast<std::size_t>(i) * n + i] = 1.0 + scale * diag;
    }
    cholesky_factor(jac, n);
    for (int i = 0; i < n; ++i) delta[static_cast<std::size_t>(i)] = -r[i];
    cholesky_solve(jac, n, delta);

    GridFunction dir(delta);
    // Backtracking acceptance on the residual norm (which stays well scaled
    // arbitrarily close to the minimizer, unlike Phi differences, which drop
    // below double precision there); Phi may not increase beyond round-off,
    // which preserves the per-step energy decrease.
    const double phi_slack =
        8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(phi_v));
    double trial = 1.0;
    GridFunction candidate = v + trial * dir;
    GridFunction r_candidate = residual(candidate);
    double res_candidate = grid_norm(r_candidate, 2.0);
    double phi_candidate = objective(candidate);
    int backtracks = 0;
    while ((res_candidate > (1.0 - 1e-4 * trial) * res ||
            phi_candidate > phi_v + phi_slack) &&
           backtracks < 60) {
      trial *= 0.5;
      candidate = v + trial * dir;
      r_candidate = residual(candidate);
      res_candidate = grid_norm(r_candidate, 2.0);
      phi_candidate = objective(candidate);
      ++backtracks;
    }
    const bool stalled = res_candidate > (1.0 - 1e-4 * trial) * res ||
                         phi_candidate > phi_v + phi_slack;
    if (!stalled) {
      v = std::move(candidate);
      r = std::move(r_candidate);
      res = res_candidate;
      phi_v = phi_candidate;
    }
    if (res <= tol) {
      return {std::move(v), StepStat{static_cast<int>(iter), res}};
    }
    // Endgame for p < 2: collapse sub-ulp gaps into exact ties, which is the
    // only double representation free of the phi(ulp) residual floor.
    if (pv < 2.0 && res <= 1e4 * tol) {
      GridFunction w = v;
      if (snap_ties(k, w)) {
        GridFunction rw = residual(w);
        const double resw = grid_norm(rw, 2.0);
        if (resw <= res) {
          v = std::move(w);
          r = std::move(rw);
          res = resw;
          phi_v = objective(v);
          if (res <= tol) {
            return {std::move(v), StepStat{static_cast<int>(iter), res}};
          }
        }
      }
    }
    if (stalled) {
      fail(ErrorCode::Convergence,
           "backward_euler: inner line search stalled at residual " +
               format_double(res) + " (tolerance " + format_double(tol) + ")");
    }
  }
  fail(ErrorCode::Convergence,
       "backward_euler: inner solve exhausted " + std::to_string(max_inner) +
           " iterations (last residual " + format_double(res) +
           ", tolerance " + format_double(tol) + ")");
}

}  // namespace

Trajectory backward_euler(const KernelMatrix& k, const GridFunction& g,
                          PExponent p, double tau, double horizon_t,
                          double inner_tol, long max_inner) {
  check_initial(k, g);
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    fail(ErrorCode::Validation, "backward_euler: tau must be positive");
  }
  if (!(horizon_t > 0.0) || !std::isfinite(horizon_t)) {
    fail(ErrorCode::Validation, "backward_euler: horizon must be positive");
  }
  if (max_inner < 1) {
    fail(ErrorCode::Validation, "backward_euler: max_inner must be >= 1");
  }

  std::vector<double> times{0.0};
  std::vector<GridFunction> states{g};
  std::vector<StepStat> stats;
  double t = 0.0;
  while (t < horizon_t) {
    const double step_tau = std::min(tau, horizon_t - t);
    const GridFunction& u = states.back();
    const double tol =
        inner_tol > 0.0 ? inner_tol : 1e-10 * std::max(1.0, grid_norm(u, 2.0));
    ProxResult r = prox_step(k, u, p, step_tau, tol, max_inner);
    t = (horizon_t - t <= tau) ? horizon_t : t + step_tau;
    times.push_back(t);
    states.push_back(std::move(r.v));
    stats.push_back(r.stat);
  }
  return Trajectory(std::move(times), std::move(states), p.value(),
                    Scheme::Backward, false, std::move(stats));
}

namespace {

// Index h with t in ]times[h-1], times[h]], after slack handling; t may also
// equal 0 (returns 0 and callers special-case it).
long locate_knot(const Trajectory& traj, double t, bool allow_zero,
                 const char* what) {
  const std::vector<double>& ts = traj.times();
  const double t_final = ts.back();
  const double slack = 1e-9 * std::max(1.0, std::abs(t_final));
  if (t > t_final + slack || t < (allow_zero ? -slack : 0.0) ||
      (!allow_zero && t <= 0.0)) {
    fail(ErrorCode::Domain,
         std::string(what) + ": time " + std::to_string(t) +
             " outside the " + (allow_zero ? "[0, " : "]0, ") +
             std::to_string(t_final) + "] range of the trajectory");
  }
  const double tc = std::clamp(t, 0.0, t_final);
  if (tc <= ts.front()) return 0;
  const auto it = std::lower_bound(ts.begin(), ts.end(), tc);
  return static_cast<long>(it - ts.begin());
}

}  // namespace

GridFunction interpolate_linear(const Trajectory& traj, double t) {
  const long h = locate_knot(traj, t, /*allow_zero=*/true, "interpolate_linear");
  if (h == 0) return traj.state(0);
  const double t0 = traj.time(h - 1);
  const double t1 = traj.time(h);
  const double lam = (std::clamp(t, 0.0, traj.final_time()) - t0) / (t1 - t0);
  GridFunction out = traj.state(h - 1);
  out *= 1.0 - lam;
  out += lam * traj.state(h);
  return out;
}

GridFunction interpolate_constant(const Trajectory& traj, double t) {
  const long h =
      locate_knot(traj, t, /*allow_zero=*/false, "interpolate_constant");
  // Forward scheme holds the left knot on ]t_{h-1}, t_h], backward the right.
  return traj.scheme() == Scheme::Forward ? traj.state(h - 1) : traj.state(h);
}

double interpolant_gap(const Trajectory& traj, double q,
                       std::span<const double> probes) {
  if (probes.empty()) {
    fail(ErrorCode::InvalidArgument, "interpolant_gap: no probe times given");
  }
  double sup = 0.0;
  for (double t : probes) {
    const GridFunction diff =
        interpolate_constant(traj, t) - interpolate_linear(traj, t);
    sup = std::max(sup, grid_norm(diff, q));
  }
  return sup;
}

}  // namespace plap
