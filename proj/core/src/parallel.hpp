#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qpperc::detail {

inline int clamp_workers(int workers, std::int64_t n) {
    return static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(workers, n)));
}

/// Static partition of [0, n) across exactly `workers` threads (clamp with
/// clamp_workers first). body(worker, i) must be safe to call concurrently
/// for distinct i; each worker index is used by one thread only, so
/// per-worker accumulators need no locking. The partition only affects
/// wall-clock, never which calls happen. The first exception thrown by any
/// body is rethrown on the caller after all threads join.
inline void run_partitioned(std::int64_t n, int workers,
                            const std::function<void(int, std::int64_t)>& body) {
    if (n <= 0) return;
    const int w = clamp_workers(workers, n);
    if (w == 1) {
        for (std::int64_t i = 0; i < n; ++i) body(0, i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) {
        const std::int64_t lo = n * t / w;
        const std::int64_t hi = n * (t + 1) / w;
        threads.emplace_back([&, t, lo, hi] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) body(t, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace qpperc::detail
