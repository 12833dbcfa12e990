#pragma once

#include <cstddef>
#include <functional>

namespace wishart {

// Worker count: WISHART_SPECTRA_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, count) over thread_count() workers with a static
// interleaved split, so results written per index do not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace wishart
