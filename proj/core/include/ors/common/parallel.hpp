#pragma once

#include <cstddef>
#include <functional>

namespace ors {

/// Worker count: ORS_LAB_THREADS if set and positive, else hardware concurrency.
unsigned thread_budget();

/// Runs body(i) for i in [0, n). Each index must be independent; results are
/// identical regardless of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ors
