#pragma once

#include <cstddef>
#include <functional>

namespace pdperm {

/// Resolves a user thread count: 0 means "all hardware threads".
unsigned resolve_threads(unsigned requested);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is visited exactly once;
/// the first exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace pdperm
