#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace citewin {

// Runs body(i) for i in [0, n) on up to `threads` threads (0 = hardware
// concurrency). Each index runs exactly once; callers write results into
// pre-sized slots so the outcome does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
}

}  // namespace citewin
