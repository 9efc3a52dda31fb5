#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rgkit {

// Worker count: RGKIT_WORKERS env var, else hardware concurrency. Results
// are written to preallocated per-index slots, so the schedule never affects
// numerical output.
inline int worker_count() {
    if (const char* env = std::getenv("RGKIT_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const int used = static_cast<int>(std::min<std::size_t>(workers, n));
    for (int w = 0; w < used; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = static_cast<std::size_t>(w); i < n;
                 i += static_cast<std::size_t>(used))
                fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace rgkit
