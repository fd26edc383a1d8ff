#pragma once

#include <cstddef>
#include <functional>

namespace anisofield {

/// Upper bound on worker threads used by internal loops. Zero restores the
/// default (ANISOFIELD_THREADS if set, else hardware concurrency).
void set_thread_limit(unsigned n);
unsigned thread_limit();

/// Runs body(i) for i in [0, n) on up to thread_limit() threads. Each index is
/// visited exactly once; callers write into per-index slots and reduce in index
/// order afterwards, so results never depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t min_per_thread = 1);

}  // namespace anisofield
