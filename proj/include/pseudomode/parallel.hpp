#pragma once

// Loop and reduction kernels with a serial reference path and an OpenMP path.
// Reductions use a fixed chunk count so the parallel result does not depend on thread count.

#include <omp.h>

#include <algorithm>
#include <cstddef>
#include <exception>
#include <vector>

#include "pseudomode/expansion.hpp"

namespace pm {

inline constexpr std::size_t kReductionChunks = 64;

template <class F>
void for_each_index(ExecPolicy policy, std::size_t count, F&& fn) {
  if (policy == ExecPolicy::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(count); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(pm_for_each_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

// Same as for_each_index with dynamic scheduling, for uneven work items such as path points.
template <class F>
void for_each_task(ExecPolicy policy, std::size_t count, F&& fn) {
  if (policy == ExecPolicy::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < static_cast<long>(count); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(pm_for_each_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

// sum_{i < count} term(i).
template <class T, class F>
T reduce_sum(ExecPolicy policy, std::size_t count, F&& term) {
  if (policy == ExecPolicy::serial) {
    T acc{};
    for (std::size_t i = 0; i < count; ++i) acc += term(i);
    return acc;
  }
  std::vector<T> partial(kReductionChunks, T{});
  const std::size_t chunk = (count + kReductionChunks - 1) / kReductionChunks;
#pragma omp parallel for schedule(static)
  for (long c = 0; c < static_cast<long>(kReductionChunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  T acc{};
  for (const T& v : partial) acc += v;
  return acc;
}

// max_{i < count} term(i); exact, so both paths agree bitwise.
template <class F>
double reduce_max(ExecPolicy policy, std::size_t count, double init, F&& term) {
  if (policy == ExecPolicy::serial) {
    double m = init;
    for (std::size_t i = 0; i < count; ++i) m = std::max(m, term(i));
    return m;
  }
  double m = init;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (long i = 0; i < static_cast<long>(count); ++i) m = std::max(m, term(static_cast<std::size_t>(i)));
  return m;
}

}  // namespace pm
