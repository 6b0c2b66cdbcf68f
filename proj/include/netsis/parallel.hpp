#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace netsis {

/// Static block partition of [0, count) over at most `workers` threads.
/// Results must be written to per-index slots by the callee; with that
/// discipline the outcome is independent of the worker count. The first
/// exception thrown by any worker is rethrown on the caller.
inline void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    if (workers <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    const int n_threads = std::min(workers, count);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_threads);
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += n_threads) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace netsis
