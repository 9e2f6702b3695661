#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rough {

// Runs body(task) for task = 0..n_tasks-1 on up to n_threads workers.
// Tasks must write only to their own preallocated slots; together with
// counter-based substreams this makes batch output independent of the
// thread count.
inline void parallel_for_tasks(int n_threads, std::size_t n_tasks,
                               const std::function<void(std::size_t)>& body) {
    if (n_threads <= 1 || n_tasks <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(std::min<std::size_t>(n_tasks, n_threads));
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace rough
