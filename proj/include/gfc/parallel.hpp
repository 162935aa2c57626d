#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gfc::par {

unsigned max_threads();
void set_max_threads(unsigned n); // 0 restores hardware default

// Static block partition over [begin, end); body(i) must write only to
// index-i slots so results are identical for any thread count.
template <class F>
void parallel_for(std::size_t begin, std::size_t end, F&& body) {
    const std::size_t n = end > begin ? end - begin : 0;
    unsigned nt = max_threads();
    if (nt <= 1 || n < 2) {
        for (std::size_t i = begin; i < end; ++i) body(i);
        return;
    }
    if (static_cast<std::size_t>(nt) > n) nt = static_cast<unsigned>(n);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto run_block = [&](std::size_t lo, std::size_t hi) {
        try {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    const std::size_t chunk = (n + nt - 1) / nt;
    std::size_t lo = begin;
    for (unsigned t = 0; t + 1 < nt && lo < end; ++t) {
        std::size_t hi = std::min(end, lo + chunk);
        pool.emplace_back(run_block, lo, hi);
        lo = hi;
    }
    run_block(lo, end);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace gfc::par
