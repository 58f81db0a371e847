#include "plap.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "plap/csv.hpp"
#include "plap/experiments.hpp"
#include "plap/util.hpp"
#include "plap/version.hpp"

// Handle definitions: thin wrappers around the core value types.
struct plap_graphon {
  plap::GraphonSpec spec;
};
struct plap_kernel {
  plap::KernelMatrix k;
};
struct plap_grid_fn {
  plap::GridFunction u;
};
struct plap_trajectory {
  plap::Trajectory t;
};

namespace {

thread_local std::string g_last_error;

plap_status status_of(plap::ErrorCode code) {
  using plap::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return PLAP_ERR_INVALID_ARGUMENT;
    case ErrorCode::Config: return PLAP_ERR_CONFIG;
    case ErrorCode::Dimension: return PLAP_ERR_DIMENSION;
    case ErrorCode::Type: return PLAP_ERR_TYPE;
    case ErrorCode::Domain: return PLAP_ERR_DOMAIN;
    case ErrorCode::Resolution: return PLAP_ERR_RESOLUTION;
    case ErrorCode::Stability: return PLAP_ERR_STABILITY;
    case ErrorCode::Convergence: return PLAP_ERR_CONVERGENCE;
    case ErrorCode::Infeasible: return PLAP_ERR_INFEASIBLE;
    case ErrorCode::UndefinedDimension: return PLAP_ERR_UNDEFINED_DIMENSION;
    case ErrorCode::DegenerateFit: return PLAP_ERR_DEGENERATE_FIT;
    case ErrorCode::Parse: return PLAP_ERR_PARSE;
    case ErrorCode::Validation: return PLAP_ERR_VALIDATION;
    case ErrorCode::Gate: return PLAP_ERR_GATE;
    case ErrorCode::Io: return PLAP_ERR_IO;
    case ErrorCode::Internal: return PLAP_ERR_INTERNAL;
  }
  return PLAP_ERR_INTERNAL;
}

// Runs the body, translating exceptions into status codes + the thread-local
// message. The body returns PLAP_OK (or a status for soft failures).
template <typename Fn>
plap_status guarded(Fn&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const plap::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PLAP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PLAP_ERR_INTERNAL;
  }
}

plap_status invalid(const char* message) {
  g_last_error = message;
  return PLAP_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

/* ---- library ---- */

const char* plap_version(void) { return plap::kVersion; }

const char* plap_status_name(plap_status status) {
  switch (status) {
    case PLAP_OK: return "ok";
    case PLAP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case PLAP_ERR_CONFIG: return "config";
    case PLAP_ERR_DIMENSION: return "dimension";
    case PLAP_ERR_TYPE: return "type";
    case PLAP_ERR_DOMAIN: return "domain";
    case PLAP_ERR_RESOLUTION: return "resolution";
    case PLAP_ERR_STABILITY: return "stability";
    case PLAP_ERR_CONVERGENCE: return "convergence";
    case PLAP_ERR_INFEASIBLE: return "infeasible";
    case PLAP_ERR_UNDEFINED_DIMENSION: return "undefined_dimension";
    case PLAP_ERR_DEGENERATE_FIT: return "degenerate_fit";
    case PLAP_ERR_PARSE: return "parse";
    case PLAP_ERR_VALIDATION: return "validation";
    case PLAP_ERR_GATE: return "gate";
    case PLAP_ERR_IO: return "io";
    case PLAP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* plap_last_error(void) { return g_last_error.c_str(); }

void plap_set_max_workers(int workers) { plap::set_max_workers(workers); }

/* ---- kernel specifications ---- */

plap_status plap_graphon_create(const char* kind, const double* params,
                                size_t n_params, plap_graphon** out) {
  if (!kind || !out || (n_params > 0 && !params)) {
    return invalid("plap_graphon_create: null argument");
  }
  return guarded([&] {
    std::vector<double> p(params, params + n_params);
    *out = new plap_graphon{plap::GraphonSpec::make(kind, std::move(p))};
    return PLAP_OK;
  });
}

void plap_graphon_free(plap_graphon* g) { delete g; }

plap_status plap_graphon_eval(const plap_graphon* g, double x, double y,
                              double* out) {
  if (!g || !out) return invalid("plap_graphon_eval: null argument");
  return guarded([&] {
    *out = g->spec.eval(x, y);
    return PLAP_OK;
  });
}

plap_status plap_graphon_is_indicator(const plap_graphon* g, int* out) {
  if (!g || !out) return invalid("plap_graphon_is_indicator: null argument");
  *out = g->spec.is_indicator() ? 1 : 0;
  return PLAP_OK;
}

const char* plap_kernel_catalog(void) {
  thread_local std::string catalog;
  catalog = plap::kernel_catalog_text();
  return catalog.c_str();
}

/* ---- discrete kernels ---- */

plap_status plap_kernel_quotient_average(const plap_graphon* g, int n,
                                         int quad_points, plap_kernel** out) {
  if (!g || !out) return invalid("plap_kernel_quotient_average: null argument");
  return guarded([&] {
    *out = new plap_kernel{plap::quotient_average(g->spec, n, quad_points)};
    return PLAP_OK;
  });
}

plap_status plap_kernel_collocation(const plap_graphon* g, int n,
                                    plap_kernel** out) {
  if (!g || !out) return invalid("plap_kernel_collocation: null argument");
  return guarded([&] {
    *out = new plap_kernel{plap::collocation_sample(g->spec, n)};
    return PLAP_OK;
  });
}

plap_status plap_kernel_simple_graph(const plap_graphon* g, int n,
                                     int samples_per_axis, plap_kernel** out) {
  if (!g || !out) return invalid("plap_kernel_simple_graph: null argument");
  return guarded([&] {
    *out = new plap_kernel{
        plap::simple_graph(g->spec, n, samples_per_axis).to_kernel()};
    return PLAP_OK;
  });
}

plap_status plap_kernel_from_data(int n, const double* row_major,
                                  plap_kernel** out) {
  if (!row_major || !out) return invalid("plap_kernel_from_data: null argument");
  return guarded([&] {
    if (n < 1) {
      plap::fail(plap::ErrorCode::InvalidArgument,
                 "plap_kernel_from_data: size must be positive");
    }
    std::vector<double> w(row_major,
                          row_major + static_cast<size_t>(n) * static_cast<size_t>(n));
    *out = new plap_kernel{plap::KernelMatrix::from_rows(n, std::move(w))};
    return PLAP_OK;
  });
}

void plap_kernel_free(plap_kernel* k) { delete k; }

plap_status plap_kernel_size(const plap_kernel* k, int* out) {
  if (!k || !out) return invalid("plap_kernel_size: null argument");
  *out = k->k.size();
  return PLAP_OK;
}

plap_status plap_kernel_entry(const plap_kernel* k, int i, int j, double* out) {
  if (!k || !out) return invalid("plap_kernel_entry: null argument");
  if (i < 0 || j < 0 || i >= k->k.size() || j >= k->k.size()) {
    return invalid("plap_kernel_entry: index out of range");
  }
  *out = k->k(i, j);
  return PLAP_OK;
}

plap_status plap_kernel_distance(const plap_kernel* a, const plap_kernel* b,
                                 double q, double* out) {
  if (!a || !b || !out) return invalid("plap_kernel_distance: null argument");
  return guarded([&] {
    *out = plap::kernel_distance(a->k, b->k, q);
    return PLAP_OK;
  });
}

plap_status plap_kernel_modulus_smoothness(const plap_kernel* k, double h,
                                           double q, double* out) {
  if (!k || !out) {
    return invalid("plap_kernel_modulus_smoothness: null argument");
  }
  return guarded([&] {
    *out = plap::modulus_smoothness(k->k, h, q);
    return PLAP_OK;
  });
}

plap_status plap_kernel_write_csv(const plap_kernel* k, const char* path) {
  if (!k || !path) return invalid("plap_kernel_write_csv: null argument");
  return guarded([&] {
    plap::write_kernel_csv(k->k, path);
    return PLAP_OK;
  });
}

plap_status plap_kernel_read_csv(const char* path, plap_kernel** out) {
  if (!path || !out) return invalid("plap_kernel_read_csv: null argument");
  return guarded([&] {
    *out = new plap_kernel{plap::read_kernel_csv(path)};
    return PLAP_OK;
  });
}

plap_status plap_boundary_dimension(const plap_graphon* g, const int* levels,
                                    size_t n_levels, int samples_per_axis,
                                    double* rho, long* counts) {
  if (!g || !levels || !rho) {
    return invalid("plap_boundary_dimension: null argument");
  }
  return guarded([&] {
    const plap::BoxCountResult result = plap::boundary_dimension(
        g->spec, std::span<const int>(levels, n_levels), samples_per_axis);
    *rho = result.rho_estimate;
    if (counts) {
      for (size_t i = 0; i < result.counts.size() && i < n_levels; ++i) {
        counts[i] = result.counts[i];
      }
    }
    return PLAP_OK;
  });
}

/* ---- grid functions ---- */

plap_status plap_grid_fn_from_data(int n, const double* values,
                                   plap_grid_fn** out) {
  if (!values || !out) return invalid("plap_grid_fn_from_data: null argument");
  return guarded([&] {
    if (n < 1) {
      plap::fail(plap::ErrorCode::InvalidArgument,
                 "plap_grid_fn_from_data: size must be positive");
    }
    std::vector<double> v(values, values + n);
    *out = new plap_grid_fn{plap::GridFunction(std::move(v))};
    return PLAP_OK;
  });
}

void plap_grid_fn_free(plap_grid_fn* u) { delete u; }

plap_status plap_grid_fn_size(const plap_grid_fn* u, int* out) {
  if (!u || !out) return invalid("plap_grid_fn_size: null argument");
  *out = u->u.size();
  return PLAP_OK;
}

plap_status plap_grid_fn_values(const plap_grid_fn* u, double* buffer,
                                size_t buffer_len) {
  if (!u || !buffer) return invalid("plap_grid_fn_values: null argument");
  const size_t n = static_cast<size_t>(u->u.size());
  if (buffer_len < n) return invalid("plap_grid_fn_values: buffer too small");
  std::memcpy(buffer, u->u.values().data(), n * sizeof(double));
  return PLAP_OK;
}

plap_status plap_grid_fn_norm(const plap_grid_fn* u, double q, double* out) {
  if (!u || !out) return invalid("plap_grid_fn_norm: null argument");
  return guarded([&] {
    *out = plap::grid_norm(u->u, q);
    return PLAP_OK;
  });
}

plap_status plap_grid_fn_refine(const plap_grid_fn* u, int factor,
                                plap_grid_fn** out) {
  if (!u || !out) return invalid("plap_grid_fn_refine: null argument");
  return guarded([&] {
    *out = new plap_grid_fn{plap::refine(u->u, factor)};
    return PLAP_OK;
  });
}

plap_status plap_grid_fn_pairing(const plap_grid_fn* u, const plap_grid_fn* v,
                                 double* out) {
  if (!u || !v || !out) return invalid("plap_grid_fn_pairing: null argument");
  return guarded([&] {
    *out = plap::pairing(u->u, v->u);
    return PLAP_OK;
  });
}

plap_status plap_grid_fn_modulus_smoothness(const plap_grid_fn* u, double h,
                                            double q, double* out) {
  if (!u || !out) {
    return invalid("plap_grid_fn_modulus_smoothness: null argument");
  }
  return guarded([&] {
    *out = plap::modulus_smoothness(u->u, h, q);
    return PLAP_OK;
  });
}

plap_status plap_grid_fn_write_csv(const plap_grid_fn* u, const char* path) {
  if (!u || !path) return invalid("plap_grid_fn_write_csv: null argument");
  return guarded([&] {
    plap::write_grid_fn_csv(u->u, path);
    return PLAP_OK;
  });
}

plap_status plap_grid_fn_read_csv(const char* path, plap_grid_fn** out) {
  if (!path || !out) return invalid("plap_grid_fn_read_csv: null argument");
  return guarded([&] {
    *out = new plap_grid_fn{plap::read_grid_fn_csv(path)};
    return PLAP_OK;
  });
}

/* ---- nonlocal operator ---- */

plap_status plap_apply_plaplacian(const plap_kernel* k, const plap_grid_fn* u,
                                  double p, plap_grid_fn** out) {
  if (!k || !u || !out) return invalid("plap_apply_plaplacian: null argument");
  return guarded([&] {
    *out = new plap_grid_fn{
        plap::apply_plaplacian(k->k, u->u, plap::PExponent(p))};
    return PLAP_OK;
  });
}

plap_status plap_energy(const plap_kernel* k, const plap_grid_fn* u, double p,
                        double* out) {
  if (!k || !u || !out) return invalid("plap_energy: null argument");
  return guarded([&] {
    *out = plap::energy(k->k, u->u, plap::PExponent(p));
    return PLAP_OK;
  });
}

/* ---- time integration ---- */

plap_status plap_forward_euler_fixed(const plap_kernel* k,
                                     const plap_grid_fn* g, double p,
                                     double tau, double horizon_t,
                                     long max_steps, plap_trajectory** out) {
  if (!k || !g || !out) return invalid("plap_forward_euler_fixed: null argument");
  return guarded([&] {
    *out = new plap_trajectory{plap::forward_euler(
        k->k, g->u, plap::PExponent(p),
        plap::StepSchedule::fixed(tau, horizon_t, max_steps))};
    return PLAP_OK;
  });
}

plap_status plap_forward_euler_adaptive(const plap_kernel* k,
                                        const plap_grid_fn* g, double p,
                                        double alpha_eps, double alpha_nu,
                                        double horizon_t, long max_steps,
                                        plap_trajectory** out) {
  if (!k || !g || !out) {
    return invalid("plap_forward_euler_adaptive: null argument");
  }
  return guarded([&] {
    *out = new plap_trajectory{plap::forward_euler(
        k->k, g->u, plap::PExponent(p),
        plap::StepSchedule::adaptive(alpha_eps, alpha_nu, horizon_t,
                                     max_steps))};
    return PLAP_OK;
  });
}

plap_status plap_backward_euler(const plap_kernel* k, const plap_grid_fn* g,
                                double p, double tau, double horizon_t,
                                double inner_tol, plap_trajectory** out) {
  if (!k || !g || !out) return invalid("plap_backward_euler: null argument");
  return guarded([&] {
    *out = new plap_trajectory{plap::backward_euler(
        k->k, g->u, plap::PExponent(p), tau, horizon_t, inner_tol)};
    return PLAP_OK;
  });
}

void plap_trajectory_free(plap_trajectory* t) { delete t; }

plap_status plap_trajectory_knots(const plap_trajectory* t, long* out) {
  if (!t || !out) return invalid("plap_trajectory_knots: null argument");
  *out = t->t.knots();
  return PLAP_OK;
}

plap_status plap_trajectory_time(const plap_trajectory* t, long h,
                                 double* out) {
  if (!t || !out) return invalid("plap_trajectory_time: null argument");
  if (h < 0 || h >= t->t.knots()) {
    return invalid("plap_trajectory_time: knot index out of range");
  }
  *out = t->t.time(h);
  return PLAP_OK;
}

plap_status plap_trajectory_state(const plap_trajectory* t, long h,
                                  plap_grid_fn** out) {
  if (!t || !out) return invalid("plap_trajectory_state: null argument");
  if (h < 0 || h >= t->t.knots()) {
    return invalid("plap_trajectory_state: knot index out of range");
  }
  return guarded([&] {
    *out = new plap_grid_fn{t->t.state(h)};
    return PLAP_OK;
  });
}

plap_status plap_trajectory_truncated(const plap_trajectory* t, int* out) {
  if (!t || !out) return invalid("plap_trajectory_truncated: null argument");
  *out = t->t.truncated() ? 1 : 0;
  return PLAP_OK;
}

plap_status plap_interpolate_linear(const plap_trajectory* t, double time,
                                    plap_grid_fn** out) {
  if (!t || !out) return invalid("plap_interpolate_linear: null argument");
  return guarded([&] {
    *out = new plap_grid_fn{plap::interpolate_linear(t->t, time)};
    return PLAP_OK;
  });
}

plap_status plap_interpolate_constant(const plap_trajectory* t, double time,
                                      plap_grid_fn** out) {
  if (!t || !out) return invalid("plap_interpolate_constant: null argument");
  return guarded([&] {
    *out = new plap_grid_fn{plap::interpolate_constant(t->t, time)};
    return PLAP_OK;
  });
}

plap_status plap_interpolant_gap(const plap_trajectory* t, double q,
                                 const double* probes, size_t n_probes,
                                 double* out) {
  if (!t || !probes || !out) return invalid("plap_interpolant_gap: null argument");
  return guarded([&] {
    *out = plap::interpolant_gap(t->t, q,
                                 std::span<const double>(probes, n_probes));
    return PLAP_OK;
  });
}

plap_status plap_trajectory_write_csv(const plap_trajectory* t,
                                      const char* path) {
  if (!t || !path) return invalid("plap_trajectory_write_csv: null argument");
  return guarded([&] {
    plap::write_trajectory_csv(t->t, path);
    return PLAP_OK;
  });
}

/* ---- large-p limit ---- */

plap_status plap_sinf_violation(const plap_kernel* k, double support_threshold,
                                const plap_grid_fn* v, double* out) {
  if (!k || !v || !out) return invalid("plap_sinf_violation: null argument");
  return guarded([&] {
    const plap::ConstraintSet cs =
        plap::ConstraintSet::from_kernel(k->k, support_threshold);
    *out = plap::sinf_violation(cs, v->u);
    return PLAP_OK;
  });
}

plap_status plap_project_sinf(const plap_kernel* k, double support_threshold,
                              const plap_grid_fn* v, double tol,
                              plap_grid_fn** out) {
  if (!k || !v || !out) return invalid("plap_project_sinf: null argument");
  return guarded([&] {
    const plap::ConstraintSet cs =
        plap::ConstraintSet::from_kernel(k->k, support_threshold);
    *out = new plap_grid_fn{plap::project_sinf(cs, v->u, tol)};
    return PLAP_OK;
  });
}

plap_status plap_p_sweep(const plap_kernel* k, const plap_grid_fn* g,
                         const double* p_list, size_t n_p, double horizon_t,
                         double tau, double* tau_used, double* sup_deviation) {
  if (!k || !g || !p_list || !tau_used || !sup_deviation) {
    return invalid("plap_p_sweep: null argument");
  }
  return guarded([&] {
    const std::vector<plap::PSweepRow> rows = plap::p_sweep(
        k->k, g->u, std::span<const double>(p_list, n_p), horizon_t, tau);
    for (size_t i = 0; i < rows.size(); ++i) {
      tau_used[i] = rows[i].tau_used;
      sup_deviation[i] = rows[i].sup_deviation;
    }
    return PLAP_OK;
  });
}

/* ---- verification harness ---- */

plap_status plap_consistency_error(const plap_trajectory* a,
                                   const plap_trajectory* b, double q,
                                   const double* probes, size_t n_probes,
                                   double* out) {
  if (!a || !b || !probes || !out) {
    return invalid("plap_consistency_error: null argument");
  }
  return guarded([&] {
    *out = plap::consistency_error(a->t, b->t, q,
                                   std::span<const double>(probes, n_probes));
    return PLAP_OK;
  });
}

plap_status plap_fit_rate(const double* xs, const double* errs, size_t count,
                          double* slope, double* intercept,
                          double* r_squared) {
  if (!xs || !errs || !slope) return invalid("plap_fit_rate: null argument");
  return guarded([&] {
    const plap::RateReport report =
        plap::fit_rate(std::span<const double>(xs, count),
                       std::span<const double>(errs, count));
    *slope = report.slope;
    if (intercept) *intercept = report.intercept;
    if (r_squared) *r_squared = report.r_squared;
    return PLAP_OK;
  });
}

plap_status plap_contraction_test(const plap_kernel* k, double p, double q,
                                  const plap_grid_fn* g1,
                                  const plap_grid_fn* g2, double horizon_t,
                                  double tau, double* lhs, double* rhs,
                                  int* pass) {
  if (!k || !g1 || !g2 || !pass) {
    return invalid("plap_contraction_test: null argument");
  }
  return guarded([&] {
    const plap::ContractionResult result =
        plap::contraction_test(k->k, p, q, g1->u, g2->u, horizon_t, tau);
    if (lhs) *lhs = result.lhs;
    if (rhs) *rhs = result.rhs;
    *pass = result.pass ? 1 : 0;
    return PLAP_OK;
  });
}

plap_status plap_invariant_suite(uint64_t seed, const char* report_dir,
                                 int* all_passed) {
  if (!all_passed) return invalid("plap_invariant_suite: null argument");
  return guarded([&] {
    const plap::InvariantReport report = plap::run_invariant_suite(seed);
    if (report_dir) {
      const std::string dir(report_dir);
      plap::write_text_file(dir + "/invariants.txt", report.to_text());
      plap::write_text_file(dir + "/invariants.csv", report.to_csv());
    }
    *all_passed = report.all_passed() ? 1 : 0;
    return PLAP_OK;
  });
}

/* ---- config-driven experiments ---- */

plap_status plap_run_config(const char* config_path) {
  if (!config_path) return invalid("plap_run_config: null argument");
  return guarded([&] {
    const plap::ExperimentOutcome outcome = plap::run_config_file(config_path);
    if (!outcome.gates_passed) {
      std::string msg = "gate failure:";
      for (const std::string& f : outcome.gate_failures) msg += " " + f + ";";
      g_last_error = msg;
      return PLAP_ERR_GATE;
    }
    return PLAP_OK;
  });
}

plap_status plap_verify(uint64_t seed, const char* output_dir) {
  return guarded([&] {
    const plap::ExperimentOutcome outcome =
        plap::run_verify(seed, output_dir ? output_dir : "plap_out");
    if (!outcome.gates_passed) {
      std::string msg = "invariant failures:";
      for (const std::string& f : outcome.gate_failures) msg += " " + f + ";";
      g_last_error = msg;
      return PLAP_ERR_GATE;
    }
    return PLAP_OK;
  });
}

} /* extern "C" */
