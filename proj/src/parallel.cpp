#include "gfc/parallel.hpp"

#include <atomic>

namespace gfc::par {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

unsigned max_threads() {
    unsigned n = g_max_threads.load(std::memory_order_relaxed);
    if (n != 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void set_max_threads(unsigned n) { g_max_threads.store(n, std::memory_order_relaxed); }

} // namespace gfc::par
