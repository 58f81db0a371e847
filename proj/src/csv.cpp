#include "plap/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "plap/util.hpp"

namespace plap {

namespace {

// Binary mode so line endings are LF on every platform.
std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  }
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  }
  return in;
}

double parse_number(const std::string& field, const std::string& path,
                    int line) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  double value = 0.0;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    fail(ErrorCode::Parse, path + ":" + std::to_string(line) +
                               ": expected a number, got '" + field + "'");
  }
  return value;
}

std::vector<double> parse_row(const std::string& line_text,
                              const std::string& path, int line) {
  std::vector<double> row;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line_text.find(',', start);
    const std::string field = line_text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    row.push_back(parse_number(field, path, line));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return row;
}

int parse_size_header(const std::string& line_text, const std::string& path) {
  if (line_text.rfind("n=", 0) != 0) {
    fail(ErrorCode::Parse, path + ":1: expected header 'n=<size>', got '" +
                               line_text + "'");
  }
  const double n = parse_number(line_text.substr(2), path, 1);
  if (n < 1 || n != std::floor(n)) {
    fail(ErrorCode::Parse, path + ":1: invalid size in header");
  }
  return static_cast<int>(n);
}

std::string chomp(std::string line_text) {
  while (!line_text.empty() &&
         (line_text.back() == '\n' || line_text.back() == '\r')) {
    line_text.pop_back();
  }
  return line_text;
}

}  // namespace

void write_kernel_csv(const KernelMatrix& k, const std::string& path) {
  std::ofstream out = open_out(path);
  const int n = k.size();
  out << "n=" << n << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << ',';
      out << format_double(k(i, j));
    }
    out << '\n';
  }
}

KernelMatrix read_kernel_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line_text;
  if (!std::getline(in, line_text)) {
    fail(ErrorCode::Parse, path + ": empty file");
  }
  const int n = parse_size_header(chomp(line_text), path);
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line_text)) {
      fail(ErrorCode::Parse, path + ": expected " + std::to_string(n) +
                                 " rows, got " + std::to_string(i));
    }
    const std::vector<double> row = parse_row(chomp(line_text), path, i + 2);
    if (static_cast<int>(row.size()) != n) {
      fail(ErrorCode::Parse, path + ":" + std::to_string(i + 2) + ": row has " +
                                 std::to_string(row.size()) +
                                 " values, expected " + std::to_string(n));
    }
    w.insert(w.end(), row.begin(), row.end());
  }
  return KernelMatrix::from_rows(n, std::move(w));
}

void write_grid_fn_csv(const GridFunction& u, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "n=" << u.size() << "\n";
  for (int i = 0; i < u.size(); ++i) {
    out << format_double(u[i]) << '\n';
  }
}

GridFunction read_grid_fn_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line_text;
  if (!std::getline(in, line_text)) {
    fail(ErrorCode::Parse, path + ": empty file");
  }
  const int n = parse_size_header(chomp(line_text), path);
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line_text)) {
      fail(ErrorCode::Parse, path + ": expected " + std::to_string(n) +
                                 " values, got " + std::to_string(i));
    }
    v.push_back(parse_number(chomp(line_text), path, i + 2));
  }
  return GridFunction(std::move(v));
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          const std::string& schedule_desc) {
  std::ofstream out = open_out(path);
  const int n = traj.resolution();
  out << 't';
  for (int i = 1; i <= n; ++i) out << ",u_" << i;
  out << '\n';
  for (long h = 0; h < traj.knots(); ++h) {
    out << format_double(traj.time(h));
    const GridFunction& u = traj.state(h);
    for (int i = 0; i < n; ++i) out << ',' << format_double(u[i]);
    out << '\n';
  }

  std::ostringstream meta;
  meta << "[trajectory]\n";
  meta << "scheme = "
       << (traj.scheme() == Scheme::Forward ? "forward" : "backward") << "\n";
  meta << "p = " << format_double(traj.p()) << "\n";
  meta << "n = " << n << "\n";
  meta << "knots = " << traj.knots() << "\n";
  meta << "final_time = " << format_double(traj.final_time()) << "\n";
  meta << "truncated = " << (traj.truncated() ? "true" : "false") << "\n";
  if (!schedule_desc.empty()) {
    meta << "[schedule]\n" << schedule_desc;
  }
  if (!traj.step_stats().empty()) {
    long total_inner = 0;
    double max_residual = 0.0;
    for (const StepStat& s : traj.step_stats()) {
      total_inner += s.iterations;
      max_residual = std::max(max_residual, s.residual);
    }
    meta << "[solver]\n";
    meta << "steps = " << traj.step_stats().size() << "\n";
    meta << "total_inner_iterations = " << total_inner << "\n";
    meta << "max_inner_residual = " << format_double(max_residual) << "\n";
  }
  write_text_file(path + ".meta", meta.str());
}

void write_rate_report_csv(const RateReport& report, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "x,err\n";
  for (std::size_t i = 0; i < report.xs.size(); ++i) {
    out << format_double(report.xs[i]) << ',' << format_double(report.errs[i])
        << '\n';
  }
  out << "# slope=" << format_double(report.slope)
      << " intercept=" << format_double(report.intercept)
      << " r_squared=" << format_double(report.r_squared)
      << " degenerate=" << (report.degenerate ? 1 : 0)
      << " used_points=" << report.used_points << '\n';
}

void write_p_sweep_csv(std::span<const PSweepRow> rows,
                       const std::string& path) {
  std::ofstream out = open_out(path);
  out << "p,tau_used,sup_deviation\n";
  for (const PSweepRow& row : rows) {
    out << format_double(row.p) << ',' << format_double(row.tau_used) << ','
        << format_double(row.sup_deviation) << '\n';
  }
}

void write_dimension_csv(const BoxCountResult& result,
                         std::span<const int> levels,
                         const std::string& path) {
  std::ofstream out = open_out(path);
  out << "level,count\n";
  for (std::size_t l = 0; l < levels.size(); ++l) {
    out << levels[l] << ',' << result.counts[l] << '\n';
  }
  out << "# rho=" << format_double(result.rho_estimate) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
  if (!out) {
    fail(ErrorCode::Io, "failed writing '" + path + "'");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in = open_in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace plap
