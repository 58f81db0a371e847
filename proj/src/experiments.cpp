#include "plap/experiments.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <vector>

#include "plap/csv.hpp"
#include "plap/util.hpp"
#include "plap/version.hpp"

namespace plap {

namespace {

std::string resolve_output_dir(const Config& config) {
  if (const char* env = std::getenv("PLAP_OUTPUT_DIR"); env && *env) {
    config.get_string("output_dir", "");  // consume; the override wins
    return env;
  }
  return config.get_string("output_dir", "plap_out");
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    fail(ErrorCode::Io, "cannot create output directory '" + dir +
                            "': " + ec.message());
  }
}

double positive_number(const Config& c, const std::string& key,
                       double fallback = 0.0, bool required = true) {
  const double v = required ? c.get_number(key) : c.get_number(key, fallback);
  if (!(v > 0.0)) {
    fail(ErrorCode::Validation,
         "config field '" + key + "' must be positive");
  }
  return v;
}

int positive_integer(const Config& c, const std::string& key, long fallback,
                     bool required) {
  const long v = required ? c.get_integer(key) : c.get_integer(key, fallback);
  if (v < 1 || v > 1'000'000'000L) {
    fail(ErrorCode::Validation,
         "config field '" + key + "' must be a positive integer");
  }
  return static_cast<int>(v);
}

GraphonSpec read_graphon(const Config& c) {
  const std::string kind = c.get_string("kernel.kind");
  std::vector<double> params;
  if (c.has("kernel.params")) params = c.get_number_list("kernel.params");
  return GraphonSpec::make(kind, std::move(params));
}

struct KernelSettings {
  Discretization d = Discretization::Average;
  int quad_points = 8;
  int samples_per_axis = 9;
};

KernelSettings read_kernel_settings(const Config& c) {
  KernelSettings ks;
  ks.d = discretization_from_name(
      c.get_string("kernel.discretization", "average"));
  ks.quad_points = positive_integer(c, "kernel.quad_points", 8, false);
  ks.samples_per_axis = positive_integer(c, "kernel.samples_per_axis", 9, false);
  return ks;
}

InitialSpec read_initial(const Config& c) {
  const std::string family = c.get_string("initial.family", "smooth");
  std::vector<double> params;
  if (c.has("initial.params")) params = c.get_number_list("initial.params");
  const long seed = c.get_integer("initial.seed", 0);
  if (seed < 0) {
    fail(ErrorCode::Validation, "config field 'initial.seed' must be >= 0");
  }
  return InitialSpec::make(family, std::move(params),
                           static_cast<std::uint64_t>(seed));
}

// --- gate evaluation -------------------------------------------------------

// Marks the rate-gate keys consumed so ensure_all_consumed() can run before
// the sweep; the values are re-read once the report exists.
void reserve_rate_gates(const Config& c) {
  c.has("gate.slope_min");
  c.has("gate.slope_max");
  c.has("gate.r2_min");
}

void gate_rate(const Config& c, const RateReport& report,
               ExperimentOutcome& outcome) {
  const bool has_slope_gate =
      c.has("gate.slope_min") || c.has("gate.slope_max") || c.has("gate.r2_min");
  if (report.degenerate) {
    if (has_slope_gate) {
      outcome.gate_failures.push_back(
          "rate fit is degenerate (all errors at round-off scale); slope "
          "gates cannot be evaluated");
    }
    // Consume the gate keys so validation still passes.
    c.get_number("gate.slope_min", 0.0);
    c.get_number("gate.slope_max", 0.0);
    c.get_number("gate.r2_min", 0.0);
    return;
  }
  if (c.has("gate.slope_min")) {
    const double v = c.get_number("gate.slope_min");
    if (report.slope < v) {
      outcome.gate_failures.push_back(
          "slope " + format_double(report.slope) + " below gate.slope_min " +
          format_double(v));
    }
  }
  if (c.has("gate.slope_max")) {
    const double v = c.get_number("gate.slope_max");
    if (report.slope > v) {
      outcome.gate_failures.push_back(
          "slope " + format_double(report.slope) + " above gate.slope_max " +
          format_double(v));
    }
  }
  if (c.has("gate.r2_min")) {
    const double v = c.get_number("gate.r2_min");
    if (report.r_squared < v) {
      outcome.gate_failures.push_back(
          "r_squared " + format_double(report.r_squared) +
          " below gate.r2_min " + format_double(v));
    }
  }
}

// --- manifest ---------------------------------------------------------------

void write_manifest(const ExperimentOutcome& outcome, const Config* config,
                    std::span<const std::string> artifacts, double seconds) {
  std::ostringstream out;
  out << "plap " << kVersion << "\n";
  out << "experiment = " << outcome.experiment << "\n";
  out << "output_dir = " << outcome.output_dir << "\n";
  out << "wall_seconds = " << format_double(seconds) << "\n";
  for (const std::string& a : artifacts) {
    out << "artifact = " << a << "\n";
  }
  out << "gates = " << (outcome.gates_passed ? "passed" : "FAILED") << "\n";
  for (const std::string& f : outcome.gate_failures) {
    out << "gate_failure = " << f << "\n";
  }
  if (config) {
    out << "\n# normalized configuration\n" << config->echo();
  }
  write_text_file(outcome.output_dir + "/manifest.txt", out.str());
}

// --- experiments ------------------------------------------------------------

std::vector<std::string> run_simulate(const Config& c,
                                      ExperimentOutcome& outcome) {
  const GraphonSpec spec = read_graphon(c);
  const KernelSettings ks = read_kernel_settings(c);
  const int n = positive_integer(c, "kernel.n", 0, true);
  const InitialSpec g_spec = read_initial(c);
  const double p = c.get_number("evolution.p");
  const double horizon = positive_number(c, "evolution.horizon");
  const std::string scheme_name = c.get_string("evolution.scheme", "backward");
  const std::string mode = c.get_string("evolution.mode", "fixed");
  const long max_steps = c.get_integer("evolution.max_steps", 200000);

  double tau = 0.0, alpha_eps = 0.0, alpha_nu = 0.0;
  if (mode == "fixed") {
    tau = positive_number(c, "evolution.tau");
  } else if (mode == "adaptive") {
    alpha_eps = positive_number(c, "evolution.alpha_eps");
    alpha_nu = c.get_number("evolution.alpha_nu");
  } else {
    fail(ErrorCode::Validation,
         "config field 'evolution.mode': expected fixed or adaptive, got '" +
             mode + "'");
  }
  const double inner_tol = c.get_number("evolution.inner_tol", -1.0);
  c.ensure_all_consumed();

  const KernelMatrix k =
      discretize_kernel(spec, ks.d, n, ks.quad_points, ks.samples_per_axis);
  const GridFunction g = discretize_initial(g_spec, n);
  const PExponent pe(p);

  Trajectory traj;
  std::string schedule_desc;
  if (scheme_name == "forward") {
    const StepSchedule schedule =
        mode == "fixed"
            ? StepSchedule::fixed(tau, horizon, max_steps)
            : StepSchedule::adaptive(alpha_eps, alpha_nu, horizon, max_steps);
    std::ostringstream desc;
    if (mode == "fixed") {
      desc << "fixed tau=" << format_double(tau);
    } else {
      desc << "adaptive eps=" << format_double(alpha_eps)
           << " nu=" << format_double(alpha_nu);
    }
    schedule_desc = desc.str();
    traj = forward_euler(k, g, pe, schedule);
  } else if (scheme_name == "backward") {
    if (mode != "fixed") {
      fail(ErrorCode::Validation,
           "config field 'evolution.mode': the backward scheme only supports "
           "fixed steps");
    }
    schedule_desc = "fixed tau=" + format_double(tau);
    traj = backward_euler(k, g, pe, tau, horizon, inner_tol, max_steps);
  } else {
    fail(ErrorCode::Validation,
         "config field 'evolution.scheme': expected forward or backward, "
         "got '" + scheme_name + "'");
  }

  write_trajectory_csv(traj, outcome.output_dir + "/trajectory.csv",
                       schedule_desc);
  if (traj.truncated()) {
    outcome.gate_failures.push_back(
        "run truncated by evolution.max_steps before the horizon");
  }
  return {"trajectory.csv", "trajectory.csv.meta"};
}

std::vector<std::string> run_sweep_n(const Config& c,
                                     ExperimentOutcome& outcome) {
  const GraphonSpec spec = read_graphon(c);
  const KernelSettings ks = read_kernel_settings(c);
  const InitialSpec g_spec = read_initial(c);
  const double p = c.get_number("evolution.p");
  const double horizon = positive_number(c, "evolution.horizon");
  const std::vector<double> ns_raw = c.get_number_list("sweep.ns");
  const double q = c.get_number("sweep.q", 2.0);
  OracleConfig oracle;
  oracle.n_ref = positive_integer(c, "sweep.oracle_n", 512, false);
  oracle.tau_ref = positive_number(c, "sweep.oracle_tau", 0.01, false);
  reserve_rate_gates(c);
  c.ensure_all_consumed();
  std::vector<int> ns;
  for (double v : ns_raw) {
    if (v != static_cast<long>(v) || v < 2) {
      fail(ErrorCode::Validation,
           "config field 'sweep.ns' must list integers >= 2");
    }
    ns.push_back(static_cast<int>(v));
  }

  const RateReport report =
      sweep_n(spec, ks.d, g_spec, p, q, ns, oracle, horizon);
  write_rate_report_csv(report, outcome.output_dir + "/rate_n.csv");
  gate_rate(c, report, outcome);
  return {"rate_n.csv"};
}

std::vector<std::string> run_sweep_tau(const Config& c,
                                       ExperimentOutcome& outcome) {
  const GraphonSpec spec = read_graphon(c);
  const KernelSettings ks = read_kernel_settings(c);
  const int n = positive_integer(c, "kernel.n", 0, true);
  const InitialSpec g_spec = read_initial(c);
  const double p = c.get_number("evolution.p");
  const double horizon = positive_number(c, "evolution.horizon");
  const std::string scheme_name = c.get_string("evolution.scheme", "backward");
  const std::vector<double> taus = c.get_number_list("sweep.taus");
  const double q = c.get_number("sweep.q", 2.0);
  double min_tau = taus.empty() ? 1.0 : taus.front();
  for (double tau : taus) min_tau = std::min(min_tau, tau);
  const double oracle_tau =
      positive_number(c, "sweep.oracle_tau", min_tau / 8.0, false);
  Scheme scheme;
  if (scheme_name == "forward") {
    scheme = Scheme::Forward;
  } else if (scheme_name == "backward") {
    scheme = Scheme::Backward;
  } else {
    fail(ErrorCode::Validation,
         "config field 'evolution.scheme': expected forward or backward, "
         "got '" + scheme_name + "'");
  }

  reserve_rate_gates(c);
  c.ensure_all_consumed();

  const KernelMatrix k =
      discretize_kernel(spec, ks.d, n, ks.quad_points, ks.samples_per_axis);
  const GridFunction g = discretize_initial(g_spec, n);
  const RateReport report =
      sweep_tau(k, g, p, q, taus, oracle_tau, horizon, scheme);
  write_rate_report_csv(report, outcome.output_dir + "/rate_tau.csv");
  gate_rate(c, report, outcome);
  return {"rate_tau.csv"};
}

std::vector<std::string> run_p_sweep(const Config& c,
                                     ExperimentOutcome& outcome) {
  const GraphonSpec spec = read_graphon(c);
  const KernelSettings ks = read_kernel_settings(c);
  const int n = positive_integer(c, "kernel.n", 0, true);
  const InitialSpec g_spec = read_initial(c);
  const double horizon = positive_number(c, "evolution.horizon");
  const double tau = positive_number(c, "evolution.tau");
  const std::vector<double> ps = c.get_number_list("sweep.ps");
  const bool project = c.get_bool("initial.project", false);
  const bool gate_monotone = c.get_bool("gate.monotone", false);
  const bool has_final_gate = c.has("gate.max_final_deviation");
  const double max_final =
      has_final_gate ? c.get_number("gate.max_final_deviation") : 0.0;
  c.ensure_all_consumed();

  const KernelMatrix k =
      discretize_kernel(spec, ks.d, n, ks.quad_points, ks.samples_per_axis);
  GridFunction g = discretize_initial(g_spec, n);
  const ConstraintSet cs = ConstraintSet::from_kernel(k);
  if (project) g = project_sinf(cs, g);

  const std::vector<PSweepRow> rows = p_sweep(k, g, ps, horizon, tau);
  write_p_sweep_csv(rows, outcome.output_dir + "/p_sweep.csv");

  if (gate_monotone) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].sup_deviation > rows[i - 1].sup_deviation + 1e-12) {
        outcome.gate_failures.push_back(
            "sup deviation rises from p=" + format_double(rows[i - 1].p) +
            " to p=" + format_double(rows[i].p) + " (" +
            format_double(rows[i - 1].sup_deviation) + " -> " +
            format_double(rows[i].sup_deviation) + ")");
      }
    }
  }
  if (has_final_gate && !rows.empty() &&
      rows.back().sup_deviation > max_final) {
    outcome.gate_failures.push_back(
        "final sup deviation " + format_double(rows.back().sup_deviation) +
        " above gate.max_final_deviation " + format_double(max_final));
  }
  return {"p_sweep.csv"};
}

std::vector<std::string> run_dimension(const Config& c,
                                       ExperimentOutcome& outcome) {
  const GraphonSpec spec = read_graphon(c);
  const int spa = positive_integer(c, "kernel.samples_per_axis", 9, false);
  const std::vector<double> levels_raw = c.get_number_list("sweep.levels");
  const bool has_rho_min = c.has("gate.rho_min");
  const double rho_min = has_rho_min ? c.get_number("gate.rho_min") : 0.0;
  const bool has_rho_max = c.has("gate.rho_max");
  const double rho_max = has_rho_max ? c.get_number("gate.rho_max") : 0.0;
  c.ensure_all_consumed();

  std::vector<int> levels;
  for (double v : levels_raw) {
    if (v != static_cast<long>(v) || v < 4) {
      fail(ErrorCode::Validation,
           "config field 'sweep.levels' must list integers >= 4");
    }
    levels.push_back(static_cast<int>(v));
  }
  const BoxCountResult result = boundary_dimension(spec, levels, spa);
  write_dimension_csv(result, levels, outcome.output_dir + "/dimension.csv");

  if (has_rho_min && result.rho_estimate < rho_min) {
    outcome.gate_failures.push_back(
        "rho " + format_double(result.rho_estimate) + " below gate.rho_min " +
        format_double(rho_min));
  }
  if (has_rho_max && result.rho_estimate > rho_max) {
    outcome.gate_failures.push_back(
        "rho " + format_double(result.rho_estimate) + " above gate.rho_max " +
        format_double(rho_max));
  }
  return {"dimension.csv"};
}

std::vector<std::string> run_verify_into(std::uint64_t seed,
                                         ExperimentOutcome& outcome) {
  const InvariantReport report = run_invariant_suite(seed);
  write_text_file(outcome.output_dir + "/invariants.txt", report.to_text());
  write_text_file(outcome.output_dir + "/invariants.csv", report.to_csv());
  for (const InvariantCheck& check : report.checks) {
    if (!check.passed) {
      outcome.gate_failures.push_back(
          "invariant '" + check.name + "' failed: measured " +
          format_double(check.measured) + " > threshold " +
          format_double(check.threshold));
    }
  }
  return {"invariants.txt", "invariants.csv"};
}

}  // namespace

ExperimentOutcome run_config(const Config& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentOutcome outcome;
  outcome.experiment = config.get_string("experiment");
  outcome.output_dir = resolve_output_dir(config);
  ensure_dir(outcome.output_dir);

  std::vector<std::string> artifacts;
  if (outcome.experiment == "simulate") {
    artifacts = run_simulate(config, outcome);
  } else if (outcome.experiment == "sweep_n") {
    artifacts = run_sweep_n(config, outcome);
  } else if (outcome.experiment == "sweep_tau") {
    artifacts = run_sweep_tau(config, outcome);
  } else if (outcome.experiment == "p_sweep") {
    artifacts = run_p_sweep(config, outcome);
  } else if (outcome.experiment == "dimension") {
    artifacts = run_dimension(config, outcome);
  } else if (outcome.experiment == "verify") {
    const long seed = config.get_integer("seed", 20260814);
    if (seed < 0) {
      fail(ErrorCode::Validation, "config field 'seed' must be >= 0");
    }
    config.ensure_all_consumed();
    artifacts = run_verify_into(static_cast<std::uint64_t>(seed), outcome);
  } else {
    fail(ErrorCode::Validation,
         "config field 'experiment': expected simulate, sweep_n, sweep_tau, "
         "p_sweep, dimension or verify, got '" + outcome.experiment + "'");
  }

  outcome.gates_passed = outcome.gate_failures.empty();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_manifest(outcome, &config, artifacts, seconds);
  return outcome;
}

ExperimentOutcome run_config_file(const std::string& path) {
  return run_config(Config::parse_file(path));
}

ExperimentOutcome run_verify(std::uint64_t seed,
                             const std::string& output_dir) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentOutcome outcome;
  outcome.experiment = "verify";
  outcome.output_dir = output_dir;
  if (const char* env = std::getenv("PLAP_OUTPUT_DIR"); env && *env) {
    outcome.output_dir = env;
  }
  ensure_dir(outcome.output_dir);
  const std::vector<std::string> artifacts = run_verify_into(seed, outcome);
  outcome.gates_passed = outcome.gate_failures.empty();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_manifest(outcome, nullptr, artifacts, seconds);
  return outcome;
}

}  // namespace plap
