#pragma once

// Index-parallel loop over [0, n). Results are written by index, so output
// is independent of the thread count. The pool size is the hardware
// concurrency, capped by the QLEAK_THREADS environment variable when set.

#include <functional>

namespace qleak {

int WorkerCount();

// Runs body(i) for every i in [0, n). The first exception thrown by any
// body is rethrown after all workers stop.
void ParallelFor(int n, const std::function<void(int)>& body);

}  // namespace qleak
