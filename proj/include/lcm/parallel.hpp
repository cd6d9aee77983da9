#pragma once

#include <cstddef>
#include <functional>

namespace lcm {

/// Worker count: the override if set, else LCM_THREADS, else hardware concurrency.
unsigned thread_count();
/// 0 clears the override.
void set_thread_count(unsigned threads);

/// Runs body(i) for i in [0, count). Work is split dynamically across
/// threads; callers write results into slot i and reduce in index order, which
/// keeps results independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lcm
