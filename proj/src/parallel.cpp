#include "curvegate/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace curvegate {

int configure_threads_from_env() {
  if (const char* env = std::getenv("CURVEGATE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // Ignore malformed values; keep the OpenMP default.
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

void set_max_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace curvegate
