#include "ofpca/parallel.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace ofpca {

namespace {
const int kDefaultThreads = omp_get_max_threads();
}

int num_threads() { return omp_get_max_threads(); }

void set_num_threads(int n) { omp_set_num_threads(n > 0 ? n : kDefaultThreads); }

int threads_from_env() {
  const char* raw = std::getenv("OFPCA_THREADS");
  if (raw == nullptr) return 0;
  int value = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc{} || ptr != end || value < 0) return 0;
  return value;
}

ThreadCountGuard::ThreadCountGuard(int n) : previous_(num_threads()) { set_num_threads(n); }

ThreadCountGuard::~ThreadCountGuard() { omp_set_num_threads(previous_); }

}  // namespace ofpca
