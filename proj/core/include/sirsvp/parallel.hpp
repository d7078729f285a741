#pragma once

#include <cstddef>
#include <functional>

namespace sirsvp
{

/// Number of worker threads for `requested` (0 = hardware concurrency, at least 1).
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace sirsvp
