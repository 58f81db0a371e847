#include "plap/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "plap/util.hpp"

namespace plap {

namespace {

void check_unit_square(double x, double y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    fail(ErrorCode::Domain, "kernel evaluation outside [0,1]^2 at (" +
                                std::to_string(x) + "," + std::to_string(y) +
                                ")");
  }
}

void check_resolution(int n) {
  if (n <= 0) {
    fail(ErrorCode::InvalidArgument,
         "grid resolution must be positive, got " + std::to_string(n));
  }
}

void require_param_count(const char* kind, const std::vector<double>& params,
                         std::size_t max_count) {
  if (params.size() > max_count) {
    fail(ErrorCode::Config, std::string("kernel kind '") + kind + "' takes " +
                                std::to_string(max_count) +
                                " parameter(s), got " +
                                std::to_string(params.size()));
  }
  for (double v : params) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::Config,
           std::string("kernel kind '") + kind + "': parameters must be finite");
    }
  }
}

double param_or(const std::vector<double>& params, std::size_t i,
                double fallback) {
  return i < params.size() ? params[i] : fallback;
}

// Normalized truncated Weierstrass profile with range strictly inside ]0,1[:
//   F(x) = 1/2 + (1-a)/2 * sum_{k=0}^{terms-1} a^k cos(b^k pi x).
double weierstrass_profile(double x, double a, double b, int terms) {
  double acc = 0.0;
  double ak = 1.0;
  double bk = 1.0;
  for (int k = 0; k < terms; ++k) {
    acc += ak * std::cos(bk * std::numbers::pi * x);
    ak *= a;
    bk *= b;
  }
  return 0.5 + 0.5 * (1.0 - a) * acc;
}

constexpr KernelCatalogEntry kCatalog[] = {
    {"constant", "value (default 1)", "smooth (Lip 1)",
     "exact discretization; degenerate-rate control case"},
    {"product", "none", "smooth (Lip 1)", "weighted-graph rate ~ n^-1"},
    {"mean", "none", "smooth (Lip 1)", "weighted-graph rate ~ n^-1"},
    {"halfplane", "none", "indicator, boundary dimension 1",
     "simple-graph rate ~ n^-((2-rho)/p)"},
    {"disk", "center, radius (default 0.5, 0.4)",
     "indicator, boundary dimension 1",
     "simple-graph rate ~ n^-((2-rho)/p)"},
    {"checkerboard", "blocks per axis (default 2)",
     "indicator (bounded variation), boundary dimension 1",
     "simple-graph rate, piecewise-constant support"},
    {"weierstrass", "a, b, terms (default 0.5, 3, 8)",
     "indicator, fractal boundary (dimension 2 + log(a)/log(b))",
     "fractal-boundary box counting; rates reported, not gated"},
};

}  // namespace

GraphonSpec::GraphonSpec(KernelKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
  switch (kind_) {
    case KernelKind::Constant: {
      require_param_count("constant", params_, 1);
      const double c = param_or(params_, 0, 1.0);
      if (c < 0.0) {
        fail(ErrorCode::Config, "constant kernel value must be >= 0");
      }
      params_ = {c};
      lo_ = hi_ = c;
      break;
    }
    case KernelKind::Product:
      require_param_count("product", params_, 0);
      lo_ = 0.0;
      hi_ = 1.0;
      break;
    case KernelKind::Mean:
      require_param_count("mean", params_, 0);
      lo_ = 0.0;
      hi_ = 1.0;
      break;
    case KernelKind::Halfplane:
      require_param_count("halfplane", params_, 0);
      lo_ = 0.0;
      hi_ = 1.0;
      break;
    case KernelKind::Disk: {
      require_param_count("disk", params_, 2);
      const double c = param_or(params_, 0, 0.5);
      const double r = param_or(params_, 1, 0.4);
      if (!(c >= 0.0 && c <= 1.0) || !(r > 0.0)) {
        fail(ErrorCode::Config,
             "disk kernel needs center in [0,1] and radius > 0");
      }
      params_ = {c, r};
      lo_ = 0.0;
      hi_ = 1.0;
      break;
    }
    case KernelKind::Checkerboard: {
      require_param_count("checkerboard", params_, 1);
      const double m = param_or(params_, 0, 2.0);
      if (!(m >= 1.0) || m != std::floor(m)) {
        fail(ErrorCode::Config,
             "checkerboard kernel needs an integer block count >= 1");
      }
      params_ = {m};
      lo_ = 0.0;
      hi_ = 1.0;
      break;
    }
    case KernelKind::Weierstrass: {
      require_param_count("weierstrass", params_, 3);
      const double a = param_or(params_, 0, 0.5);
      const double b = param_or(params_, 1, 3.0);
      const double terms = param_or(params_, 2, 8.0);
      if (!(a > 0.0 && a < 1.0)) {
        fail(ErrorCode::Config, "weierstrass kernel needs a in ]0,1[");
      }
      if (!(b > 1.0)) {
        fail(ErrorCode::Config, "weierstrass kernel needs b > 1");
      }
      if (!(terms >= 1.0) || terms != std::floor(terms) || terms > 64.0) {
        fail(ErrorCode::Config,
             "weierstrass kernel needs an integer term count in [1,64]");
      }
      params_ = {a, b, terms};
      lo_ = 0.0;
      hi_ = 1.0;
      break;
    }
  }
}

GraphonSpec GraphonSpec::make(KernelKind kind, std::vector<double> params) {
  return GraphonSpec(kind, std::move(params));
}

GraphonSpec GraphonSpec::make(const std::string& kind_name,
                              std::vector<double> params) {
  for (std::size_t i = 0; i < std::size(kCatalog); ++i) {
    if (kind_name == kCatalog[i].name) {
      return GraphonSpec(static_cast<KernelKind>(i), std::move(params));
    }
  }
  fail(ErrorCode::Config, "unknown kernel kind '" + kind_name + "'");
}

const char* GraphonSpec::kind_name() const {
  return kCatalog[static_cast<std::size_t>(kind_)].name;
}

bool GraphonSpec::is_indicator() const {
  switch (kind_) {
    case KernelKind::Constant:
      return params_[0] == 0.0 || params_[0] == 1.0;
    case KernelKind::Product:
    case KernelKind::Mean:
      return false;
    default:
      return true;
  }
}

double GraphonSpec::eval(double x, double y) const {
  check_unit_square(x, y);
  switch (kind_) {
    case KernelKind::Constant:
      return params_[0];
    case KernelKind::Product:
      return x * y;
    case KernelKind::Mean:
      return 0.5 * (x + y);
    case KernelKind::Halfplane:
      return x + y <= 1.0 ? 1.0 : 0.0;
    case KernelKind::Disk: {
      const double dx = x - params_[0];
      const double dy = y - params_[0];
      return dx * dx + dy * dy <= params_[1] * params_[1] ? 1.0 : 0.0;
    }
    case KernelKind::Checkerboard: {
      const int m = static_cast<int>(params_[0]);
      const int bx = std::min(m - 1, static_cast<int>(std::floor(x * m)));
      const int by = std::min(m - 1, static_cast<int>(std::floor(y * m)));
      return (bx + by) % 2 == 0 ? 1.0 : 0.0;
    }
    case KernelKind::Weierstrass: {
      // Symmetrized subgraph: the union {y <= F(x)} cup {x <= F(y)} keeps
      // the fractal boundary while making the kernel symmetric.
      const double a = params_[0];
      const double b = params_[1];
      const int terms = static_cast<int>(params_[2]);
      return (y <= weierstrass_profile(x, a, b, terms) ||
              x <= weierstrass_profile(y, a, b, terms))
                 ? 1.0
                 : 0.0;
    }
  }
  fail(ErrorCode::Internal, "unhandled kernel kind");
}

KernelMatrix quotient_average(const GraphonSpec& spec, int n,
                              int quad_points) {
  check_resolution(n);
  if (quad_points < 1) {
    fail(ErrorCode::InvalidArgument,
         "quadrature points per axis must be >= 1, got " +
             std::to_string(quad_points));
  }
  const int q = quad_points;
  const double cell = 1.0 / n;
  const double sub = cell / q;
  std::vector<double> w(static_cast<std::size_t>(n) * n);
  // Computes the upper triangle only and mirrors, so the matrix is exactly
  // symmetric regardless of summation order.
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int s = 0; s < q; ++s) {
        const double x = i * cell + (s + 0.5) * sub;
        for (int t = 0; t < q; ++t) {
          const double y = j * cell + (t + 0.5) * sub;
          acc += spec.eval(x, y);
        }
      }
      const double avg = acc / (static_cast<double>(q) * q);
      w[static_cast<std::size_t>(i) * n + j] = avg;
      w[static_cast<std::size_t>(j) * n + i] = avg;
    }
  }
  return KernelMatrix::unchecked(n, std::move(w));
}

KernelMatrix collocation_sample(const GraphonSpec& spec, int n) {
  check_resolution(n);
  std::vector<double> w(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i + 1) / n;
    for (int j = i; j < n; ++j) {
      const double y = static_cast<double>(j + 1) / n;
      const double v = spec.eval(x, y);
      w[static_cast<std::size_t>(i) * n + j] = v;
      w[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
  return KernelMatrix::unchecked(n, std::move(w));
}

namespace {

void require_indicator(const GraphonSpec& spec, const char* what) {
  if (!spec.is_indicator()) {
    fail(ErrorCode::Type, std::string(what) +
                              " requires an indicator kernel; kind '" +
                              spec.kind_name() + "' is weighted");
  }
}

void check_samples_per_axis(int samples_per_axis) {
  if (samples_per_axis < 2) {
    fail(ErrorCode::InvalidArgument,
         "samples_per_axis must be >= 2 so cell corners are sampled, got " +
             std::to_string(samples_per_axis));
  }
}

// Scans the closed-cell sample grid; reports whether any sample hits the
// support and whether any misses it.
void scan_cell(const GraphonSpec& spec, int n, int i, int j, int spa,
               bool* any_one, bool* any_zero) {
  const double cell = 1.0 / n;
  const double step = cell / (spa - 1);
  *any_one = false;
  *any_zero = false;
  for (int s = 0; s < spa; ++s) {
    const double x = std::min(1.0, i * cell + s * step);
    for (int t = 0; t < spa; ++t) {
      const double y = std::min(1.0, j * cell + t * step);
      if (spec.eval(x, y) != 0.0) {
        *any_one = true;
      } else {
        *any_zero = true;
      }
      if (*any_one && *any_zero) return;
    }
  }
}

}  // namespace

SupportMask simple_graph(const GraphonSpec& spec, int n, int samples_per_axis) {
  check_resolution(n);
  check_samples_per_axis(samples_per_axis);
  require_indicator(spec, "simple_graph");
  SupportMask mask;
  mask.n = n;
  mask.edges.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      bool any_one = false;
      bool any_zero = false;
      scan_cell(spec, n, i, j, samples_per_axis, &any_one, &any_zero);
      const std::uint8_t e = any_one ? 1 : 0;
      mask.edges[static_cast<std::size_t>(i) * n + j] = e;
      mask.edges[static_cast<std::size_t>(j) * n + i] = e;
    }
  }
  return mask;
}

BoxCountResult boundary_dimension(const GraphonSpec& spec,
                                  std::span<const int> levels,
                                  int samples_per_axis) {
  require_indicator(spec, "boundary_dimension");
  check_samples_per_axis(samples_per_axis);
  if (levels.size() < 3) {
    fail(ErrorCode::InvalidArgument,
         "boundary_dimension needs at least 3 levels");
  }
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (levels[l] < 4) {
      fail(ErrorCode::InvalidArgument,
           "boundary_dimension levels must be >= 4");
    }
    if (l > 0 && levels[l] <= levels[l - 1]) {
      fail(ErrorCode::InvalidArgument,
           "boundary_dimension levels must be strictly increasing");
    }
  }

  BoxCountResult result;
  result.counts.reserve(levels.size());
  for (int n : levels) {
    long count = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        bool any_one = false;
        bool any_zero = false;
        scan_cell(spec, n, i, j, samples_per_axis, &any_one, &any_zero);
        if (any_one && any_zero) ++count;
      }
    }
    result.counts.push_back(count);
  }

  // Least-squares slope of log(count) against log(n) over levels with
  // boundary cells.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (result.counts[l] <= 0) continue;
    const double x = std::log(static_cast<double>(levels[l]));
    const double y = std::log(static_cast<double>(result.counts[l]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 2) {
    fail(ErrorCode::UndefinedDimension,
         "support boundary not detected: kernel support is empty or full at "
         "the requested levels");
  }
  const double denom = used * sxx - sx * sx;
  result.rho_estimate = (used * sxy - sx * sy) / denom;
  return result;
}

std::span<const KernelCatalogEntry> kernel_catalog() { return kCatalog; }

std::string kernel_catalog_text() {
  std::ostringstream out;
  out << "available kernel kinds:\n";
  for (const auto& entry : kCatalog) {
    out << "  " << entry.name << "\n"
        << "    parameters: " << entry.params_doc << "\n"
        << "    regularity: " << entry.regularity << "\n"
        << "    role:       " << entry.role << "\n";
  }
  return out.str();
}

}  // namespace plap
