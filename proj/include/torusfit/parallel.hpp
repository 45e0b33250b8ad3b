#ifndef TORUSFIT_PARALLEL_HPP
#define TORUSFIT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace torusfit {

// Worker count: TORUSFIT_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) across worker_count() threads. Work items
// must write only to their own slot; callers reduce afterwards in index
// order, which keeps results independent of the thread count.
// The first exception thrown by any item is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace torusfit

#endif  // TORUSFIT_PARALLEL_HPP
