#pragma once

#include <cstddef>
#include <functional>

namespace corrmine {

/// Number of workers to use: requested if positive, otherwise the hardware
/// concurrency (at least 1).
int resolve_threads(int requested);

/// Runs body(i) for every i in [0, count) on up to `threads` workers.
/// Callers must write results into per-index storage they own; reductions
/// over that storage are then independent of the worker count.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace corrmine
