#pragma once

#include <cstddef>
#include <functional>

namespace floodsift {

// Worker cap for internal parallelism. Defaults to the FLOODSIFT_THREADS
// environment variable when set to a positive integer, otherwise to the
// hardware concurrency.
std::size_t max_threads();
void set_max_threads(std::size_t n);  // 0 restores the default

// Runs body(i) for i in [0, count) on up to max_threads() workers. Tasks are
// handed out dynamically, so bodies must write only to per-index state.
// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace floodsift
