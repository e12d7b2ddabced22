#pragma once

#include <cstddef>
#include <functional>

namespace lopact {

/// Worker count: LOPACT_THREADS when set to a positive integer, otherwise
/// the machine's hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Each index is handled exactly once;
/// callers write results into per-index slots so the outcome does not depend
/// on scheduling. Calls made from inside a worker run inline.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lopact
