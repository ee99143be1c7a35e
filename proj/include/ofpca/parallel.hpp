#pragma once

#include <cstddef>
#include <exception>

namespace ofpca {

/// Number of OpenMP threads used by the parallel kernels.
int num_threads();

/// Sets the OpenMP thread count; n <= 0 restores the runtime default.
void set_num_threads(int n);

/// Reads OFPCA_THREADS; returns 0 when unset or unparsable.
int threads_from_env();

/// RAII guard restoring the previous thread count.
class ThreadCountGuard {
 public:
  explicit ThreadCountGuard(int n);
  ~ThreadCountGuard();
  ThreadCountGuard(const ThreadCountGuard&) = delete;
  ThreadCountGuard& operator=(const ThreadCountGuard&) = delete;

 private:
  int previous_;
};

/// Runs body(i) for i in [0, n) under a static OpenMP schedule. The first
/// exception thrown by any iteration is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(ofpca_parallel_for_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace ofpca
