#pragma once

#include <cstddef>
#include <functional>

namespace driftkit {

//! Number of worker threads: DRIFTKIT_THREADS if set (>= 1), otherwise the
//! hardware concurrency.
std::size_t thread_count();

//! Calls body(k) for k in [0, count). Each index is visited exactly once;
//! results must be written to index-owned slots so scheduling cannot change
//! them. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace driftkit
