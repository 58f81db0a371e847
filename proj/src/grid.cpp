#include "plap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plap {

namespace {

void check_same_size(const GridFunction& a, const GridFunction& b,
                     const char* what) {
  if (a.size() != b.size()) {
    fail(ErrorCode::Dimension,
         std::string(what) + ": sizes differ (" + std::to_string(a.size()) +
             " vs " + std::to_string(b.size()) + ")");
  }
}

void check_norm_order(double q, const char* what) {
  if (std::isnan(q) || q < 1.0) {
    fail(ErrorCode::Domain,
         std::string(what) + ": norm order q must be >= 1 or inf, got " +
             std::to_string(q));
  }
}

}  // namespace

GridFunction::GridFunction(int n, double value) {
  if (n <= 0) {
    fail(ErrorCode::InvalidArgument,
         "grid function size must be positive, got " + std::to_string(n));
  }
  v_.assign(static_cast<std::size_t>(n), value);
}

GridFunction::GridFunction(std::vector<double> values) : v_(std::move(values)) {
  if (v_.empty()) {
    fail(ErrorCode::InvalidArgument, "grid function must have at least one value");
  }
}

bool GridFunction::all_finite() const {
  return std::all_of(v_.begin(), v_.end(),
                     [](double x) { return std::isfinite(x); });
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  check_same_size(*this, other, "grid-function sum");
  for (int i = 0; i < size(); ++i) v_[i] += other.v_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  check_same_size(*this, other, "grid-function difference");
  for (int i = 0; i < size(); ++i) v_[i] -= other.v_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double scale) {
  for (double& x : v_) x *= scale;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double scale, GridFunction a) { return a *= scale; }

double grid_norm(const GridFunction& u, double q) {
  check_norm_order(q, "grid_norm");
  const int n = u.size();
  if (std::isinf(q)) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(u[i]));
    return m;
  }
  double sum = 0.0;
  if (q == 1.0) {
    for (int i = 0; i < n; ++i) sum += std::abs(u[i]);
  } else if (q == 2.0) {
    for (int i = 0; i < n; ++i) sum += u[i] * u[i];
  } else {
    for (int i = 0; i < n; ++i) sum += std::pow(std::abs(u[i]), q);
  }
  sum /= n;
  return q == 1.0 ? sum : (q == 2.0 ? std::sqrt(sum) : std::pow(sum, 1.0 / q));
}

double pairing(const GridFunction& u, const GridFunction& v) {
  check_same_size(u, v, "pairing");
  double sum = 0.0;
  for (int i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  return sum / u.size();
}

GridFunction refine(const GridFunction& u, int factor) {
  if (factor < 1) {
    fail(ErrorCode::InvalidArgument,
         "refinement factor must be >= 1, got " + std::to_string(factor));
  }
  if (factor == 1) return u;
  std::vector<double> fine;
  fine.reserve(static_cast<std::size_t>(u.size()) * factor);
  for (int i = 0; i < u.size(); ++i) {
    fine.insert(fine.end(), static_cast<std::size_t>(factor), u[i]);
  }
  return GridFunction(std::move(fine));
}

double mean(const GridFunction& u) {
  double sum = 0.0;
  for (int i = 0; i < u.size(); ++i) sum += u[i];
  return sum / u.size();
}

namespace {

// Largest admissible cell shift for |z| < h on an n-cell grid; falls back to
// a single cell when the open interval holds no grid point (h == 1/n).
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

double modulus_smoothness(const GridFunction& u, double h, double q) {
  check_norm_order(q, "modulus_smoothness");
  const int n = u.size();
  if (n == 1) return 0.0;
  const int kmax = max_shift_cells(n, h);
  const bool is_inf = std::isinf(q);
  double sup = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    double acc = 0.0;
    for (int i = 0; i + k < n; ++i) {
      const double d = std::abs(u[i + k] - u[i]);
      acc = is_inf ? std::max(acc, d) : acc + std::pow(d, q);
    }
    const double norm = is_inf ? acc : std::pow(acc / n, 1.0 / q);
    sup = std::max(sup, norm);
  }
  return sup;
}

}  // namespace plap
