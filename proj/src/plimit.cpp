#include "plap/plimit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace plap {

ConstraintSet ConstraintSet::from_kernel(const KernelMatrix& k,
                                         double support_threshold) {
  if (k.size() <= 0) {
    fail(ErrorCode::InvalidArgument, "constraint set: empty kernel");
  }
  if (support_threshold < 0.0) {
    fail(ErrorCode::InvalidArgument,
         "constraint set: support threshold must be >= 0");
  }
  ConstraintSet cs;
  const int n = k.size();
  cs.mask_.n = n;
  cs.mask_.edges.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (k(i, j) > support_threshold) {
        cs.mask_.edges[static_cast<std::size_t>(i) * n + j] = 1;
        cs.mask_.edges[static_cast<std::size_t>(j) * n + i] = 1;
        if (i < j) cs.pairs_.emplace_back(i, j);
      }
    }
  }
  if (cs.mask_.edge_count() == 0) {
    fail(ErrorCode::InvalidArgument,
         "constraint set: kernel support is empty at threshold " +
             std::to_string(support_threshold));
  }
  return cs;
}

namespace {

void check_sizes(const ConstraintSet& cs, const GridFunction& v,
                 const char* what) {
  if (cs.resolution() != v.size()) {
    fail(ErrorCode::Dimension,
         std::string(what) + ": constraint resolution " +
             std::to_string(cs.resolution()) +
             " does not match grid function size " + std::to_string(v.size()));
  }
}

}  // namespace

double sinf_violation(const ConstraintSet& cs, const GridFunction& v) {
  check_sizes(cs, v, "sinf_violation");
  double worst = 0.0;
  for (const auto& [i, j] : cs.pairs()) {
    worst = std::max(worst, std::abs(v[j] - v[i]) - 1.0);
  }
  return std::max(0.0, worst);
}

GridFunction project_sinf(const ConstraintSet& cs, const GridFunction& v,
                          double tol, long max_cycles) {
  check_sizes(cs, v, "project_sinf");
  if (!(tol > 0.0)) {
    fail(ErrorCode::InvalidArgument, "project_sinf: tolerance must be positive");
  }
  if (!v.all_finite()) {
    fail(ErrorCode::InvalidArgument, "project_sinf: datum must be finite");
  }

  const auto& pairs = cs.pairs();
  GridFunction w = v;
  if (pairs.empty()) return w;  // only diagonal support: everything feasible

  // Dykstra's algorithm over the pairwise slabs |w_j - w_i| <= 1. One
  // correction vector (ci, cj) per constraint; each pass re-adds the
  // correction, projects (the symmetric split by (|d|-1)/2), and stores the
  // new correction. Plain cyclic projections would converge to a feasible
  // point but not to the nearest one.
  std::vector<double> ci(pairs.size(), 0.0);
  std::vector<double> cj(pairs.size(), 0.0);
  for (long cycle = 0; cycle < max_cycles; ++cycle) {
    double moved = 0.0;
    for (std::size_t c = 0; c < pairs.size(); ++c) {
      const auto [i, j] = pairs[c];
      const double yi = w[i] + ci[c];
      const double yj = w[j] + cj[c];
      const double d = yj - yi;
      double pi = yi;
      double pj = yj;
      if (std::abs(d) > 1.0) {
        const double shift = std::copysign((std::abs(d) - 1.0) / 2.0, d);
        pi = yi + shift;
        pj = yj - shift;
      }
      ci[c] = yi - pi;
      cj[c] = yj - pj;
      moved = std::max({moved, std::abs(pi - w[i]), std::abs(pj - w[j])});
      w[i] = pi;
      w[j] = pj;
    }
    if (moved <= 0.25 * tol && sinf_violation(cs, w) <= tol) {
      return w;
    }
  }
  fail(ErrorCode::Convergence,
       "project_sinf: no convergence within " + std::to_string(max_cycles) +
           " cycles (violation " + std::to_string(sinf_violation(cs, w)) +
           ")");
}

Trajectory limit_trajectory(const ConstraintSet& cs, const GridFunction& g,
                            double horizon_t) {
  check_sizes(cs, g, "limit_trajectory");
  if (!(horizon_t > 0.0) || !std::isfinite(horizon_t)) {
    fail(ErrorCode::Validation, "limit_trajectory: horizon must be positive");
  }
  const double violation = sinf_violation(cs, g);
  if (violation > 0.0) {
    fail(ErrorCode::Infeasible,
         "limit_trajectory: datum violates the constraint set by " +
             std::to_string(violation) + "; project it first (project_sinf)");
  }
  // From a feasible datum the limit evolution is stationary: zero always
  // lies in the normal cone at an interior-or-boundary feasible point.
  return Trajectory({0.0, horizon_t}, {g, g}, 2.0, Scheme::Backward);
}

std::vector<PSweepRow> p_sweep(const KernelMatrix& k, const GridFunction& g,
                               std::span<const double> p_list,
                               double horizon_t, double tau) {
  if (p_list.empty()) {
    fail(ErrorCode::InvalidArgument, "p_sweep: empty exponent list");
  }
  for (double p : p_list) {
    if (!(p > 1.0) || std::isinf(p)) {
      fail(ErrorCode::Domain, "p_sweep: exponents must satisfy 1 < p < inf");
    }
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    fail(ErrorCode::Validation, "p_sweep: tau must be positive");
  }
  const ConstraintSet cs = ConstraintSet::from_kernel(k);
  const double violation = sinf_violation(cs, g);
  if (violation > 0.0) {
    fail(ErrorCode::Infeasible,
         "p_sweep: datum violates the support constraints by " +
             std::to_string(violation) + "; project it first (project_sinf)");
  }

  std::vector<PSweepRow> rows;
  rows.reserve(p_list.size());
  for (double p : p_list) {
    // The time step vanishes as p grows so the tau -> 0 limit is taken
    // before the p -> infinity one.
    const double tau_p = std::min(tau, 1.0 / (p * p));
    const Trajectory traj =
        backward_euler(k, g, PExponent(p), tau_p, horizon_t);
    double sup = 0.0;
    for (long h = 0; h < traj.knots(); ++h) {
      sup = std::max(sup, grid_norm(traj.state(h) - g,
                                    std::numeric_limits<double>::infinity()));
    }
    rows.push_back(PSweepRow{p, tau_p, sup});
  }
  return rows;
}

}  // namespace plap
