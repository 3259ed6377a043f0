#pragma once

#include <cstddef>
#include <functional>

namespace fquant {

// Number of worker threads to use. Defaults to the hardware concurrency,
// capped by the FQUANT_THREADS environment variable when set.
unsigned thread_cap();

// Runs body(i) for i in [0, count), possibly on multiple threads. Work is
// partitioned statically by index, so any output written to slot i is
// deterministic regardless of scheduling. Exceptions from the body are
// rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fquant
