#pragma once

#include <cstddef>
#include <functional>

namespace apx {

/// Worker count: APX_THREADS if set to a positive integer, else hardware concurrency.
[[nodiscard]] int thread_count();
void set_thread_count(int n);

/// Runs f(0..n-1) on up to thread_count() threads. The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace apx
