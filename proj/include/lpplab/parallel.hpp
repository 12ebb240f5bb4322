#pragma once

// Replica fan-out over a fixed-size thread pool. Bodies receive the replica
// index; result slots are preassigned by index so the merge order never
// depends on scheduling.

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace lpplab {

inline int default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

inline void parallel_replicas(int reps, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 1 || reps <= 1) {
        for (int i = 0; i < reps; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= reps) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min(jobs, reps);
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace lpplab
