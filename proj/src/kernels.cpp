#include "gfc/kernels.hpp"

#include <atomic>

#include "gfc/errors.hpp"
#include "kernels_detail.hpp"

namespace gfc::kern {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double dot_rev_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[n - 1 - i];
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

struct Table {
    double (*dot)(const double*, const double*, std::size_t);
    double (*dot_rev)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    Isa isa;
};

constexpr Table kScalar{dot_scalar, dot_rev_scalar, sum_scalar, Isa::scalar};

bool avx2_supported() {
#if defined(GFC_HAVE_AVX2_KERNELS)
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
#else
    return false;
#endif
}

Table best_table() {
#if defined(GFC_HAVE_AVX2_KERNELS)
    if (avx2_supported()) return Table{detail::dot_avx2, detail::dot_rev_avx2, detail::sum_avx2, Isa::avx2};
#endif
    return kScalar;
}

std::atomic<const Table*> g_table{nullptr};

const Table& table() {
    const Table* t = g_table.load(std::memory_order_acquire);
    if (!t) {
        static const Table best = best_table();
        g_table.store(&best, std::memory_order_release);
        return best;
    }
    return *t;
}

} // namespace

Isa active_isa() { return table().isa; }

bool isa_available(Isa isa) {
    if (isa == Isa::scalar) return true;
    return avx2_supported();
}

void force_isa(Isa isa) {
    if (!isa_available(isa)) throw UnsupportedError("requested kernel ISA not available on this machine");
    if (isa == Isa::scalar) {
        static const Table scalar = kScalar;
        g_table.store(&scalar, std::memory_order_release);
    } else {
        static const Table best = best_table();
        g_table.store(&best, std::memory_order_release);
    }
}

void reset_isa() {
    static const Table best = best_table();
    g_table.store(&best, std::memory_order_release);
}

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
double dot_rev(const double* a, const double* b, std::size_t n) { return table().dot_rev(a, b, n); }
double sum(const double* a, std::size_t n) { return table().sum(a, n); }

} // namespace gfc::kern
