#pragma once

#include <cstddef>
#include <functional>

namespace skinlat {

// Worker count used by parallel_for (>= 1). Does not affect LAPACK, which is
// pinned to a single thread so decompositions stay bitwise reproducible.
void set_thread_count(int n);
int thread_count() noexcept;

// Runs fn(i) for i in [0, n). Each index runs exactly once; results must be
// written to per-index slots by the caller. The first exception is rethrown
// after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Forces the BLAS backend to one thread (no-op if the backend has no such knob).
void pin_blas_threads();

}  // namespace skinlat
