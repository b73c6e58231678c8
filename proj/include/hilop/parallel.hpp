#pragma once

#include <cstddef>
#include <functional>

namespace hilop {

// 0 means "use every available core".
unsigned resolve_jobs(unsigned jobs);

// Runs body(i) for i in [begin, end) on up to `jobs` worker threads.
// Iterations must be independent; writing to disjoint slots keeps results
// identical to the serial order regardless of scheduling.
void parallel_for(std::size_t begin, std::size_t end, unsigned jobs,
                  const std::function<void(std::size_t)> &body);

} // namespace hilop
