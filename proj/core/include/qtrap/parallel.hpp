#pragma once

#include <cstddef>
#include <functional>

namespace qtrap {

/// Worker count: SPECTRA_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t thread_budget();

/// Runs body(i) for i in [0, count) on up to thread_budget() threads. Each
/// index is processed exactly once; bodies must not share mutable state.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace qtrap
