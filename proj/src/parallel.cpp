#include "specrad/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace specrad {

namespace {

std::atomic<unsigned> g_threads{0};  // 0 = not resolved yet

unsigned from_env() {
    const char* v = std::getenv("SPECRAD_THREADS");
    if (!v) return 1;
    const long n = std::strtol(v, nullptr, 10);
    if (n < 1) return 1;
    if (n > 64) return 64;
    return static_cast<unsigned>(n);
}

}  // namespace

unsigned thread_count() {
    unsigned t = g_threads.load(std::memory_order_relaxed);
    if (t == 0) {
        t = from_env();
        g_threads.store(t, std::memory_order_relaxed);
    }
    return t;
}

void set_thread_count(unsigned n) { g_threads.store(n == 0 ? 1 : n, std::memory_order_relaxed); }

}  // namespace specrad
