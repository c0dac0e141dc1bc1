#include "cmk/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

#include <Eigen/Core>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "cmk/error.hpp"

namespace cmk {

void set_compute_threads(int n) {
  if (n < 1) throw PreconditionError("thread count must be >= 1");
  Eigen::setNbThreads(n);
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

int configure_threads_from_env() {
  const char* raw = std::getenv("CMK_THREADS");
  if (raw == nullptr || *raw == '\0') return Eigen::nbThreads();
  int n = 0;
  const char* end = raw + std::strlen(raw);
  const auto [ptr, ec] = std::from_chars(raw, end, n);
  if (ec != std::errc() || ptr != end || n < 1) {
    throw PreconditionError("CMK_THREADS must be a positive integer, got '" + std::string(raw) + "'");
  }
  set_compute_threads(n);
  return n;
}

}  // namespace cmk
