#pragma once

// Thread control for the OpenMP kernels.
//
// Every parallel kernel in this library also has a serial path selected with
// Exec::serial. Both paths produce bit-identical results: work items are
// independent and reductions happen afterwards in a fixed order.

#include <exception>
#include <mutex>

namespace curvegate {

enum class Exec { serial, parallel };

// Applies CURVEGATE_THREADS (if set to a positive integer) as the OpenMP thread
// cap and returns the resulting maximum thread count.
int configure_threads_from_env();

int max_threads();

void set_max_threads(int n);

// Runs fn(i) for i in [0, n). Exceptions thrown by work items are rethrown on
// the calling thread (the one from the lowest index wins).
template <typename Fn>
void for_each_index(int n, Exec exec, Fn&& fn) {
  if (exec == Exec::serial) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  int err_index = n;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (i < err_index) {
        err_index = i;
        err = std::current_exception();
      }
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace curvegate
