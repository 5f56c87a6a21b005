#pragma once

#include <functional>

namespace wcg {

/// 0 means one worker per hardware thread.
unsigned resolve_jobs(unsigned jobs);

/// Runs fn(worker_index) on `jobs` threads (inline when jobs == 1) and joins.
/// The first exception thrown by any worker is rethrown after the join.
void run_workers(unsigned jobs, const std::function<void(unsigned)>& fn);

}  // namespace wcg
