// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace meyerslab {

int worker_count() {
    static const int count = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        n = std::clamp(n, 1, 8);
        if (const char* env = std::getenv("MEYERS_THREADS")) {
            char* end = nullptr;
            const long cap = std::strtol(env, &end, 10);
            if (end != env && cap >= 1) n = std::min<long>(n, cap);
        }
        return n;
    }();
    return count;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count();
    if (workers == 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t chunk = std::max<std::size_t>(1, n / (8 * workers));

    auto body = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= n) break;
            const std::size_t end = std::min(n, begin + chunk);
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 0; t < workers - 1; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace meyerslab
