#include "plap/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plap {

namespace {

void check_norm_order(double q, const char* what) {
  if (std::isnan(q) || q < 1.0) {
    fail(ErrorCode::Domain,
         std::string(what) + ": norm order q must be >= 1 or inf, got " +
             std::to_string(q));
  }
}

}  // namespace

KernelMatrix KernelMatrix::from_rows(int n, std::vector<double> row_major) {
  if (n <= 0) {
    fail(ErrorCode::InvalidArgument,
         "kernel size must be positive, got " + std::to_string(n));
  }
  if (row_major.size() != static_cast<std::size_t>(n) * n) {
    fail(ErrorCode::Dimension,
         "kernel data has " + std::to_string(row_major.size()) +
             " entries, expected " + std::to_string(n) + "^2");
  }
  double scale = 0.0;
  for (double w : row_major) {
    if (!std::isfinite(w)) {
      fail(ErrorCode::InvalidArgument, "kernel entries must be finite");
    }
    if (w < 0.0) {
      fail(ErrorCode::InvalidArgument, "kernel entries must be nonnegative");
    }
    scale = std::max(scale, w);
  }
  const double tol = 1e-12 * std::max(1.0, scale);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double a = row_major[static_cast<std::size_t>(i) * n + j];
      const double b = row_major[static_cast<std::size_t>(j) * n + i];
      if (std::abs(a - b) > tol) {
        fail(ErrorCode::InvalidArgument,
             "kernel is not symmetric at (" + std::to_string(i) + "," +
                 std::to_string(j) + "): " + std::to_string(a) + " vs " +
                 std::to_string(b));
      }
      const double s = 0.5 * (a + b);
      row_major[static_cast<std::size_t>(i) * n + j] = s;
      row_major[static_cast<std::size_t>(j) * n + i] = s;
    }
  }
  return unchecked(n, std::move(row_major));
}

KernelMatrix KernelMatrix::unchecked(int n, std::vector<double> row_major) {
  KernelMatrix k;
  k.n_ = n;
  k.w_ = std::move(row_major);
  return k;
}

double KernelMatrix::max_entry() const {
  double m = 0.0;
  for (double w : w_) m = std::max(m, w);
  return m;
}

double kernel_distance(const KernelMatrix& a, const KernelMatrix& b, double q) {
  check_norm_order(q, "kernel_distance");
  const int na = a.size();
  const int nb = b.size();
  if (na == 0 || nb == 0) {
    fail(ErrorCode::InvalidArgument, "kernel_distance: empty kernel");
  }
  if (na % nb != 0 && nb % na != 0) {
    fail(ErrorCode::Dimension,
         "kernel_distance: resolutions " + std::to_string(na) + " and " +
             std::to_string(nb) + " are incommensurate");
  }
  const int m = std::max(na, nb);
  const int fa = m / na;
  const int fb = m / nb;
  const bool is_inf = std::isinf(q);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const int ia = i / fa;
    const int ib = i / fb;
    for (int j = 0; j < m; ++j) {
      const double d = std::abs(a(ia, j / fa) - b(ib, j / fb));
      acc = is_inf ? std::max(acc, d) : acc + std::pow(d, q);
    }
  }
  if (is_inf) return acc;
  return std::pow(acc / (static_cast<double>(m) * m), 1.0 / q);
}

namespace {

int max_shift_cells(int n, double h) {
  if (h < 1.0 / n) {
    fail(ErrorCode::Resolution,
         "modulus of smoothness: shift bound h = " + std::to_string(h) +
             " is below the grid spacing 1/" + std::to_string(n));
  }
  const int strict = static_cast<int>(std::ceil(h * n)) - 1;
  return std::min(n - 1, std::max(1, strict));
}

}  // namespace

double modulus_smoothness(const KernelMatrix& k, double h, double q) {
  check_norm_order(q, "modulus_smoothness");
  const int n = k.size();
  if (n == 1) return 0.0;
  const int kmax = max_shift_cells(n, h);
  const bool is_inf = std::isinf(q);
  const double cells = static_cast<double>(n) * n;
  double sup = 0.0;
  for (int s = 1; s <= kmax; ++s) {
    double acc_row = 0.0;  // shift along the first axis
    double acc_col = 0.0;  // shift along the second axis
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i + s < n) {
          const double d = std::abs(k(i + s, j) - k(i, j));
          acc_row = is_inf ? std::max(acc_row, d) : acc_row + std::pow(d, q);
        }
        if (j + s < n) {
          const double d = std::abs(k(i, j + s) - k(i, j));
          acc_col = is_inf ? std::max(acc_col, d) : acc_col + std::pow(d, q);
        }
      }
    }
    if (is_inf) {
      sup = std::max({sup, acc_row, acc_col});
    } else {
      sup = std::max({sup, std::pow(acc_row / cells, 1.0 / q),
                      std::pow(acc_col / cells, 1.0 / q)});
    }
  }
  return sup;
}

long SupportMask::edge_count() const {
  long count = 0;
  for (std::uint8_t e : edges) count += e != 0;
  return count;
}

KernelMatrix SupportMask::to_kernel() const {
  std::vector<double> w(edges.size());
  std::transform(edges.begin(), edges.end(), w.begin(),
                 [](std::uint8_t e) { return e != 0 ? 1.0 : 0.0; });
  return KernelMatrix::unchecked(n, std::move(w));
}

}  // namespace plap
