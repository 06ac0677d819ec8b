#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace qlink {

/// Worker count: hardware concurrency, capped by QLINK_THREADS when set.
std::size_t worker_count();

/// Calls body(begin, end) over [0, n) in contiguous chunks of at most
/// chunk items, spread across worker_count() threads. Chunks are disjoint,
/// so results written by index do not depend on the schedule. The first
/// exception thrown by any chunk is rethrown after all workers join.
void parallel_for_chunks(std::size_t n, std::size_t chunk,
                         const std::function<void(std::size_t, std::size_t)>& body);

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

}  // namespace qlink
