#pragma once

#include <functional>

namespace molisac {

int default_worker_count();

/// Runs body(0..count-1) on a small thread pool; rethrows the first worker
/// exception. Result placement is the caller's job, so aggregation stays
/// independent of scheduling order.
void parallel_for(int count, int workers,
                  const std::function<void(int)>& body);

}  // namespace molisac
