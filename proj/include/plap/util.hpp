#pragma once

#include <functional>
#include <string>

namespace plap {

// Worker budget used by parallel experiment sweeps. 0 (the default) resolves
// to the hardware concurrency. Parallelism never changes results: tasks are
// independent and each task's arithmetic is sequential.
void set_max_workers(int workers);
int max_workers();

namespace detail {
// Runs body(0..count-1) on up to max_workers() threads with a static block
// partition. Rethrows the first exception raised by any task.
void parallel_for(long count, const std::function<void(long)>& body);
}  // namespace detail

// Shortest round-trip decimal rendering (std::to_chars), '.' decimal point
// regardless of locale. All CSV output goes through this so artifacts are
// byte-stable for a given build.
std::string format_double(double v);

}  // namespace plap
