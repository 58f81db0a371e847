#pragma once

#include <span>
#include <string>
#include <vector>

#include "plap/kernel.hpp"

namespace plap {

// Kernel catalog. All kinds are symmetric, Borel measurable and bounded on
// [0,1]^2; indicator kinds take values in {0,1} exactly.
enum class KernelKind {
  Constant,      // c (default 1)
  Product,       // x*y
  Mean,          // (x+y)/2
  Halfplane,     // 1{x+y <= 1}
  Disk,          // 1{(x-c)^2+(y-c)^2 <= r^2}, params (c, r), default (0.5, 0.4)
  Checkerboard,  // 1{floor(m*x)+floor(m*y) even}, param m, default 2
  Weierstrass,   // symmetrized subgraph indicator of a truncated Weierstrass
                 // profile, params (a, b, terms), default (0.5, 3, 8)
};

// A kernel on [0,1]^2 described by kind + parameters, with declared range
// bounds. Evaluation is symmetric in (x,y) and stays within [lo,hi].
class GraphonSpec {
 public:
  static GraphonSpec make(const std::string& kind_name,
                          std::vector<double> params = {});
  static GraphonSpec make(KernelKind kind, std::vector<double> params = {});

  double eval(double x, double y) const;  // domain error outside [0,1]^2
  bool is_indicator() const;

  KernelKind kind() const { return kind_; }
  const char* kind_name() const;
  const std::vector<double>& params() const { return params_; }
  double range_lo() const { return lo_; }
  double range_hi() const { return hi_; }

 private:
  GraphonSpec(KernelKind kind, std::vector<double> params);

  KernelKind kind_;
  std::vector<double> params_;
  double lo_ = 0.0;
  double hi_ = 1.0;
};

// Weight (i,j) = n^2 * integral of K over cell (i,j), approximated by a
// tensor-product midpoint rule with quad_points >= 1 nodes per axis (exact
// for kernels that are affine per cell, e.g. constant/product/mean at any
// resolution).
KernelMatrix quotient_average(const GraphonSpec& spec, int n,
                              int quad_points = 8);

// Weight (i,j) = K(i/n, j/n) with 1-based cell indices (collocation on the
// grid {1/n, ..., 1}).
KernelMatrix collocation_sample(const GraphonSpec& spec, int n);

// Edge (i,j) present iff any node of the uniform samples_per_axis^2 grid on
// the *closed* cell (corners included, hence samples_per_axis >= 2) lands in
// the kernel's support. Requires an indicator kernel.
SupportMask simple_graph(const GraphonSpec& spec, int n,
                         int samples_per_axis = 9);

struct BoxCountResult {
  double rho_estimate = 0.0;   // box-counting dimension of the support boundary
  std::vector<long> counts;    // boundary cells per level
};

// Box-counting (Minkowski-Bouligand) estimate of the dimension of the
// boundary of the kernel's support: at each level n, counts mesh cells whose
// closed-cell sample grid sees both values 0 and 1, then fits log N against
// log n by least squares. Requires an indicator kernel, at least three
// strictly increasing levels, each >= 4.
BoxCountResult boundary_dimension(const GraphonSpec& spec,
                                  std::span<const int> levels,
                                  int samples_per_axis = 9);

struct KernelCatalogEntry {
  const char* name;
  const char* params_doc;
  const char* regularity;
  const char* role;
};

// Stable-ordered catalog used by the CLI `kernels` subcommand.
std::span<const KernelCatalogEntry> kernel_catalog();
std::string kernel_catalog_text();

}  // namespace plap
