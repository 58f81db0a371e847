#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plap/graphon.hpp"
#include "plap/plimit.hpp"
#include "plap/rng.hpp"

namespace plap {

enum class Discretization { Average, Collocation, Simple };

Discretization discretization_from_name(const std::string& name);
const char* discretization_name(Discretization d);

KernelMatrix discretize_kernel(const GraphonSpec& spec, Discretization d,
                               int n, int quad_points = 8,
                               int samples_per_axis = 9);

// Analytic initial data, discretized by exact cell averages so the embedded
// grid function is the L^2 projection of the continuum datum.
enum class InitialKind {
  Constant,         // param: value (default 0)
  Smooth,           // x(1-x)
  Step,             // 1{x > 1/2}
  Ramp,             // param: scale (default 1); scale * x
  RandomPiecewise,  // params: cells (default 8); seeded uniform values
};

struct InitialSpec {
  InitialKind kind = InitialKind::Smooth;
  std::vector<double> params;
  std::uint64_t seed = 0;

  static InitialSpec make(const std::string& family_name,
                          std::vector<double> params = {},
                          std::uint64_t seed = 0);
};

GridFunction discretize_initial(const InitialSpec& spec, int n);

// Log-log least-squares rate fit. Exact zero errors are excluded (flagged);
// fewer than three usable points is a degenerate-fit error.
struct RateReport {
  std::vector<double> xs;
  std::vector<double> errs;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool degenerate = false;     // set by sweeps when all errors are ~0
  int used_points = 0;
  bool excluded_points = false;
};

RateReport fit_rate(std::span<const double> xs, std::span<const double> errs);

// Reference run standing in for the continuum solution: implicit Euler at
// resolution n_ref (>= 4x any swept n, commensurate) with step tau_ref.
struct OracleConfig {
  int n_ref = 512;
  double tau_ref = 0.01;
};

// 33 uniform checkpoints on [0, horizon], endpoints included.
std::vector<double> probe_times(double horizon_t, int count = 33);

// sup over probe times of the L^q distance between the linear interpolants,
// after refining the coarser run onto the finer grid. Resolutions must be
// commensurate; probes must lie within both horizons.
double consistency_error(const Trajectory& a, const Trajectory& b, double q,
                         std::span<const double> probes);

// Spatial convergence: for each n builds the kernel and initial datum,
// integrates with the oracle's time step, measures the consistency error
// against the oracle run, and fits the rate in n.
RateReport sweep_n(const GraphonSpec& spec, Discretization d,
                   const InitialSpec& g_spec, double p, double q,
                   std::span<const int> ns, const OracleConfig& oracle,
                   double horizon_t);

// Temporal convergence at fixed resolution: errors against a fine-step run
// (oracle_tau <= min(taus)/4) of the same scheme, rate fitted in tau.
RateReport sweep_tau(const KernelMatrix& k, const GridFunction& g, double p,
                     double q, std::span<const double> taus, double oracle_tau,
                     double horizon_t, Scheme scheme);

struct ContractionResult {
  double lhs = 0.0;  // ||u1(T) - u2(T)||_q
  double rhs = 0.0;  // ||g1 - g2||_q
  bool pass = false; // lhs <= rhs + 1e-8
};

// Checks the L^q contraction of the flow on implicit-Euler runs.
ContractionResult contraction_test(const KernelMatrix& k, double p, double q,
                                   const GridFunction& g1,
                                   const GridFunction& g2, double horizon_t,
                                   double tau);

struct InvariantCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst margin, oriented so measured <= threshold
  double threshold = 0.0;
  std::string note;
};

struct InvariantReport {
  std::vector<InvariantCheck> checks;
  bool all_passed() const;
  std::string to_text() const;
  std::string to_csv() const;
};

// Test hooks for negative controls (e.g. deliberately asymmetrizing the
// random kernels so symmetry-dependent checks must fail).
struct InvariantHooks {
  std::function<void(int n, std::vector<double>& row_major)> tamper_kernel;
};

// Seeded, deterministic sweep over every module's fast invariants on random
// instances with n in {4,8,16} and p in {1.5,2,3,4}.
InvariantReport run_invariant_suite(std::uint64_t seed,
                                    const InvariantHooks* hooks = nullptr);

}  // namespace plap
