#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace fcrec {

/// Maps 0 (auto) to the hardware thread count, anything else to itself.
inline int resolveThreadCount(int requested) {
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [begin, end) across at most `threads` workers.
///
/// Work is split into contiguous chunks, one per worker, so results written
/// to per-index slots land identically regardless of the thread count. The
/// first exception thrown by any worker is rethrown on the calling thread.
inline void parallelFor(int begin, int end, int threads, const std::function<void(int)>& body) {
    const int total = end - begin;
    if (total <= 0)
        return;
    const int workers = std::clamp(resolveThreadCount(threads), 1, total);
    if (workers == 1) {
        for (int i = begin; i < end; ++i)
            body(i);
        return;
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    const int chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = begin + w * chunk;
        const int hi = std::min(end, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([&, w, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i)
                    body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (const auto& err : errors)
        if (err)
            std::rethrow_exception(err);
}

} // namespace fcrec
