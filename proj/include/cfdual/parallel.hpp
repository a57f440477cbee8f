#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cfdual {

/// Worker count: min(hardware_concurrency, CFH_THREADS if set). At least 1.
inline int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("CFH_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

/// Runs body(i) for i in [0, count). Work is split into contiguous slabs, one
/// per worker; each index is processed exactly once, so writes to disjoint
/// preallocated storage are deterministic regardless of thread count.
template <class Body>
void parallel_for(std::size_t count, const Body& body) {
    const int workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Deterministic max-reduction: per-slab maxima are combined in slab order.
template <class Fn>
double parallel_max(std::size_t count, const Fn& fn) {
    const int workers = std::max(1, std::min<int>(worker_count(), static_cast<int>(count)));
    std::vector<double> slab_max(workers, 0.0);
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, w, &slab_max, &fn] {
            double m = 0.0;
            for (std::size_t i = lo; i < hi; ++i) m = std::max(m, fn(i));
            slab_max[w] = m;
        });
    }
    for (auto& t : pool) t.join();
    double m = 0.0;
    for (double s : slab_max) m = std::max(m, s);
    return m;
}

}  // namespace cfdual
