#ifndef DAMEX_PARALLEL_HPP
#define DAMEX_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace damex {

/// Runs fn(i) for i in [begin, end) across worker threads. Each index is
/// processed exactly once and workers must only write to index-owned slots,
/// so the result is independent of the worker count. Small ranges run inline.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn,
                  std::size_t min_parallel_range = 2048);

}  // namespace damex

#endif
