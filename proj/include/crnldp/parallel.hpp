#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace crnldp {

/// Parallelism cap: CRNLDP_THREADS when set, else hardware concurrency.
inline std::size_t thread_cap() {
    if (const char* env = std::getenv("CRNLDP_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<std::size_t>(n);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

/// Run fn(i) for i in [0, n) across at most thread_cap() workers. Each index
/// is processed exactly once; ordering across workers is unspecified, so fn
/// must write only to its own slot.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = std::min(thread_cap(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace crnldp
