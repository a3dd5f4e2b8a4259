#pragma once

#include <cstddef>
#include <functional>

namespace curricula {

// Runs fn(i) for i in [0, n). With threads <= 1 (or tiny n) the loop is
// serial; otherwise indices are split into contiguous blocks, one thread
// each. Each index must write only to its own slot, so the result does not
// depend on the thread count. threads == 0 means hardware concurrency.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace curricula
