#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace rou {

/// Worker-count resolution: explicit flag > ROU_WORKERS env > hardware.
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ROU_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Evaluates fn(i) for i in [0, n) across workers and returns the results in
/// index order.  Each index owns its randomness, so the outcome is
/// independent of the worker count and of scheduling.
template <class Fn>
auto run_indexed(long n, int workers, Fn&& fn)
    -> std::vector<decltype(fn(0L))> {
    using Result = decltype(fn(0L));
    std::vector<Result> results(static_cast<std::size_t>(n));
    workers = std::min<long>(resolve_workers(workers), std::max<long>(n, 1));
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) results[static_cast<std::size_t>(i)] = fn(i);
        return results;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                results[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
    return results;
}

}  // namespace rou
