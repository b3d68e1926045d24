#pragma once

#include <cstddef>
#include <functional>

namespace refbill {

// Width of the worker pool: REFRACTION_BILLIARDS_THREADS when set (>= 1),
// otherwise hardware concurrency.
unsigned parallel_width();

// Runs fn(i) for i in [0, n) on a bounded pool. Work items must write only to
// their own preallocated slots; the aggregation order is then deterministic
// and independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace refbill
