#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

namespace fracbvp {

/// Worker count for row-parallel assembly; 0 = hardware concurrency.
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n); splits into contiguous chunks across the
/// configured worker count. Each index must be independent.
void parallel_for(int n, const std::function<void(int)>& fn);

/// FNV-1a 64-bit hash (input fingerprints in reports).
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace fracbvp
