#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nlch {

inline int worker_count() {
    if (const char* env = std::getenv("NLCH_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(block) for every block in [0, blocks). Blocks are claimed by an
// atomic counter, so which thread runs a block is nondeterministic; callers
// keep determinism by writing per-block results and combining them in block
// order afterwards. The first exception thrown by any block is rethrown here.
inline void parallel_for_blocks(int blocks, const std::function<void(int)>& fn) {
    if (blocks <= 0) return;
    int nw = std::min(worker_count(), blocks);
    if (nw <= 1) {
        for (int b = 0; b < blocks; ++b) fn(b);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nw));
    for (int t = 0; t < nw; ++t) {
        pool.emplace_back([&] {
            for (int b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
                try {
                    fn(b);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace nlch
