#pragma once

#include <cstddef>
#include <functional>

namespace ufo {

// Worker threads used by data-parallel loops. 0 selects the hardware
// concurrency. Results never depend on the count.
void set_thread_count(int threads);
int thread_count();

// Runs fn(i) for every i in [0, count) on up to thread_count() threads. The
// first exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace ufo
