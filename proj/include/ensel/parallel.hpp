#pragma once

#include <cstddef>
#include <functional>

namespace ensel {

// Runs fn(i) for every i in [0, n) on up to `jobs` threads (0 counts as 1).
// Every index runs even if some throw; afterwards the exception from the
// smallest failing i is rethrown, so the reported error does not depend on
// the thread count.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace ensel
