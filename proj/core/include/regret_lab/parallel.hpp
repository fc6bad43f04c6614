#pragma once

#include <cstddef>
#include <functional>

namespace regret_lab {

/// Worker count: hardware concurrency, capped by REGRET_LAB_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each
/// index is visited exactly once; callers write results into slot i only.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace regret_lab
