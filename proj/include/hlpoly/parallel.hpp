#pragma once

#include <cstddef>
#include <functional>

namespace hlpoly {

// Worker count from HLPOLY_WORKERS, falling back to the hardware concurrency.
std::size_t default_workers();

// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
// processed exactly once; the first exception thrown is rethrown after all
// workers have joined.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace hlpoly
