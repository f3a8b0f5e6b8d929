#ifndef ERGOLAB_PARALLEL_HPP
#define ERGOLAB_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace ergolab {

// Process-wide worker count: CLI --workers > ERGOLAB_WORKERS > hardware.
inline std::atomic<unsigned>& worker_override() {
    static std::atomic<unsigned> w{0};
    return w;
}

inline void set_workers(unsigned w) { worker_override().store(w); }

inline unsigned effective_workers() {
    unsigned w = worker_override().load();
    if (w > 0) return w;
    if (const char* env = std::getenv("ERGOLAB_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return unsigned(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

// Static block partition over [0, n).  Each index is processed exactly once
// by a pure function of the index, so output never depends on the worker
// count.
template <typename F>
void parallel_for(std::size_t n, F&& fn) {
    unsigned workers = effective_workers();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = unsigned(n);
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            std::size_t lo = n * t / workers, hi = n * (t + 1) / workers;
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed) std::rethrow_exception(err);
}

} // namespace ergolab

#endif
