#include "rdciag/parallel.hpp"

#include <cstdlib>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rdciag::parallel {

namespace {
int g_threads = 0;  // 0 = uninitialized
}

int num_threads() {
  if (g_threads == 0) init_from_env();
  return g_threads;
}

void set_num_threads(int n) {
  if (n < 1) n = 1;
  g_threads = n;
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

void init_from_env() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("RDCIAG_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  set_num_threads(n);
}

}  // namespace rdciag::parallel
