#pragma once

#include <span>
#include <string>

#include "plap/harness.hpp"

namespace plap {

// CSV dialect everywhere: comma separator, '.' decimal point, one header
// row, LF line endings, shortest round-trip number rendering.

// Dense kernel: header "n=<n>", then n rows of n values. Reading checks
// symmetry (1e-12 relative) and nonnegativity, then symmetrizes exactly.
void write_kernel_csv(const KernelMatrix& k, const std::string& path);
KernelMatrix read_kernel_csv(const std::string& path);

// Grid function: header "n=<n>", then one value per line.
void write_grid_fn_csv(const GridFunction& u, const std::string& path);
GridFunction read_grid_fn_csv(const std::string& path);

// Trajectory: header "t,u_1,...,u_n", one row per knot, plus a sidecar at
// <path>.meta recording scheme, exponent, schedule and solver statistics.
void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          const std::string& schedule_desc = "");

// Rate report: header "x,err", rows, then a '#'-prefixed summary line with
// slope, intercept, r_squared, degenerate flag and used point count.
void write_rate_report_csv(const RateReport& report, const std::string& path);

// Large-p sweep: header "p,tau_used,sup_deviation".
void write_p_sweep_csv(std::span<const PSweepRow> rows,
                       const std::string& path);

// Box-count table: header "level,count", then a '#' summary with rho.
void write_dimension_csv(const BoxCountResult& result,
                         std::span<const int> levels, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace plap
