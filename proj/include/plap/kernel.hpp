#pragma once

#include <cstdint>
#include <vector>

#include "plap/errors.hpp"

namespace plap {

// Dense symmetric nonnegative n x n weight matrix, the discrete kernel of the
// nonlocal operator. Entry (i,j) is the weight between grid cells i and j
// (0-based). Construction enforces symmetry and nonnegativity.
class KernelMatrix {
 public:
  KernelMatrix() = default;

  // Validates size, finiteness, nonnegativity and symmetry (relative
  // tolerance 1e-12), then symmetrizes exactly.
  static KernelMatrix from_rows(int n, std::vector<double> row_major);

  // No validation; reserved for internal builders that construct symmetric
  // data by design and for test hooks that deliberately break invariants.
  static KernelMatrix unchecked(int n, std::vector<double> row_major);

  int size() const { return n_; }
  double operator()(int i, int j) const {
    return w_[static_cast<std::size_t>(i) * n_ + j];
  }
  double& at(int i, int j) { return w_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& data() const { return w_; }
  double max_entry() const;

 private:
  int n_ = 0;
  std::vector<double> w_;
};

// L^q([0,1]^2) distance between the embedded step kernels. Resolutions must
// be commensurate (one divides the other); both are refined to the common
// grid m and the distance is ((1/m^2) sum |a-b|^q)^(1/q), max for q = inf.
double kernel_distance(const KernelMatrix& a, const KernelMatrix& b, double q);

// Two-dimensional first-order modulus of smoothness over axis-aligned grid
// shifts z with |z| < h, same conventions as the grid-function overload.
double modulus_smoothness(const KernelMatrix& k, double h, double q);

// Adjacency of a simple graph on the n-cell grid.
struct SupportMask {
  int n = 0;
  std::vector<std::uint8_t> edges;  // row-major, symmetric

  bool edge(int i, int j) const {
    return edges[static_cast<std::size_t>(i) * n + j] != 0;
  }
  long edge_count() const;

  // {0,1}-weighted kernel carrying the same dynamics.
  KernelMatrix to_kernel() const;
};

}  // namespace plap
