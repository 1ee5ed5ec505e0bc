#pragma once

#include <functional>

namespace circuitforge {

// Worker-thread cap: CIRCUITFORGE_THREADS when set, otherwise the hardware
// concurrency.
int worker_thread_count();

// Index-parallel map with deterministic per-index work; results must be
// written to disjoint slots by the body.
void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace circuitforge
