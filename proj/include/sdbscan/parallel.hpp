#pragma once

#include <cstddef>

namespace sdbscan {

// Worker count used by every parallel loop in the library. 0 means "all
// available hardware threads". Results never depend on this value.
void set_thread_count(std::size_t threads);
std::size_t thread_count();
std::size_t hardware_threads();

}  // namespace sdbscan
