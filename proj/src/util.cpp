#include "plap/util.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <mutex>
#include <system_error>
#include <thread>
#include <vector>

namespace plap {

namespace {
std::atomic<int> g_max_workers{0};
}  // namespace

void set_max_workers(int workers) { g_max_workers.store(workers); }

int max_workers() {
  const int configured = g_max_workers.load();
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

void parallel_for(long count, const std::function<void(long)>& body) {
  if (count <= 0) return;
  const long workers =
      std::min<long>(count, static_cast<long>(max_workers()));
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (long w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (long i = w; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

std::string format_double(double v) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), v);
  if (result.ec != std::errc{}) {  // not reachable for finite doubles
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
  }
  return std::string(buffer, result.ptr);
}

}  // namespace plap
