#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace specrad {

// Thread count for data-parallel vertex loops. Comes from the SPECRAD_THREADS
// environment variable (the only runtime knob); set_thread_count overrides it
// in-process. Results are bit-identical for every thread count: parallel
// sections write disjoint per-vertex slots and all reductions stay serial.
unsigned thread_count();
void set_thread_count(unsigned n);

namespace detail {

template <typename F>
void parallel_for_impl(std::size_t n, unsigned threads, F&& body) {
    if (threads <= 1 || n < 4096) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

template <typename F>
void parallel_for(std::size_t n, F&& body) {
    detail::parallel_for_impl(n, thread_count(), body);
}

}  // namespace specrad
