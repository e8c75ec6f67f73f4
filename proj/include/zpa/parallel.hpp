#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace zpa {

// Runs fn(begin, end) over a partition of [0, n) on `jobs` threads. Chunks
// are fixed by (n, jobs), so any per-chunk results a caller collects are
// independent of scheduling. jobs == 0 means hardware concurrency.
template <typename Fn>
void parallel_ranges(std::size_t n, unsigned jobs, Fn&& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    if (jobs <= 1 || n < 2) {
        fn(std::size_t{0}, n);
        return;
    }
    if (jobs > n) jobs = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    std::size_t chunk = (n + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
        std::size_t begin = static_cast<std::size_t>(t) * chunk;
        std::size_t end = begin + chunk < n ? begin + chunk : n;
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

} // namespace zpa
