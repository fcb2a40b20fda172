#pragma once

#include <cstddef>
#include <functional>

namespace twistlap {

/// Worker count: TWISTLAP_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).  "0" also means auto.
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads.  Each
/// index runs exactly once; callers write results into slot i so the output
/// order never depends on scheduling.  The first exception thrown (lowest
/// index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace twistlap
