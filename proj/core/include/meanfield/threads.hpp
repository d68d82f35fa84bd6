#pragma once

#include <cstdint>
#include <functional>

namespace meanfield {

// Global worker count for the heavy state-vector kernels.  Default 1.
// All parallel loops write disjoint index ranges, so results are bitwise
// independent of the thread count.
void set_num_threads(int n);
int num_threads();

// Runs fn(begin, end) over disjoint chunks of [0, n).  With one thread this
// is a plain call, no thread machinery involved.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace meanfield
