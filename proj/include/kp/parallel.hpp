#pragma once

#include <cstddef>
#include <functional>

namespace kp {

// KP_TOOLKIT_THREADS if set, else hardware concurrency
unsigned thread_count();
void parallel_for(size_t n, const std::function<void(size_t)>& body);

}  // namespace kp
