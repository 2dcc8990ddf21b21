#include "sdbscan/parallel.hpp"

#include <omp.h>

#include <thread>

namespace sdbscan {

std::size_t hardware_threads() {
  const auto hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void set_thread_count(std::size_t threads) {
  omp_set_dynamic(0);
  omp_set_num_threads(static_cast<int>(threads == 0 ? hardware_threads() : threads));
}

std::size_t thread_count() { return static_cast<std::size_t>(omp_get_max_threads()); }

}  // namespace sdbscan
