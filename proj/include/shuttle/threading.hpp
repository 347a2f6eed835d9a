#pragma once

#include <functional>

namespace shuttle {

// Worker cap: ROBUST_SHUTTLE_THREADS when set (clamped to >= 1), hardware
// concurrency otherwise. Read on every call so tests can vary it.
int worker_count();

// Runs body(0..count-1) across at most worker_count() threads. Each index is
// handled exactly once and writes only its own slot, so results do not depend
// on the thread count.
void parallel_for_index(int count, const std::function<void(int)>& body);

}  // namespace shuttle
