// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace meyerslab {

/// Worker count: min(hardware, 8), capped by the MEYERS_THREADS env var.
int worker_count();

/// Runs fn(i) for i in [0, n). Each index must write only its own output
/// slots so results are independent of the thread count and schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace meyerslab
