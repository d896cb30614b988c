#pragma once

#include <cstddef>
#include <functional>

namespace hieram::cli {

std::size_t default_threads();

// Calls fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written to slot i by the caller; after a failure the workers stop and the
// exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

} // namespace hieram::cli
