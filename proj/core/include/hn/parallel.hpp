#ifndef HN_PARALLEL_HPP
#define HN_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace hn {

// Task-level parallelism knob. 0 means "hardware concurrency".
// HN_SPECTRA_THREADS overrides; set_threads() overrides the env var.
void set_threads(int n);
int effective_threads();

// Runs fn(i) for i in [0, n). Each index writes only its own slot, so the
// result is deterministic regardless of the thread count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace hn

#endif
