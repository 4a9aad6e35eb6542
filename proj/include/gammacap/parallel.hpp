#pragma once

#include <cstddef>
#include <functional>

namespace gammacap {

/// Worker count: GAMMACAP_THREADS if set to a positive integer, else hardware concurrency.
int workerCount();

/// Runs body(i) for i in [0, n) on up to workerCount() threads. Indices are handed out
/// dynamically; if any call throws, the exception from the lowest failing index is rethrown
/// after all workers finish.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gammacap
