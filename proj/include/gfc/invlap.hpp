#pragma once

#include <cmath>
#include <vector>

namespace gfc::invlap {

inline constexpr int kDefaultOrder = 18;
inline constexpr int kMinOrder = 8;
inline constexpr int kMaxOrder = 20;

// Salzer-accelerated Gaver weights V_k, k = 1..order (order even). Computed
// once per order in long double; the alternating weights reach ~1e11 at
// order 18, so transform evaluation and the weighted sum stay in long double.
const std::vector<long double>& stehfest_weights(int order);

void validate_order(int order);

struct Inversion {
    double value;
    double err_est; // |order vs order-2| difference
};

// Invert a Laplace transform at time t from real-axis samples
// F(k ln2 / t), k = 1..order.
template <class F>
Inversion invert(F&& transform, double t, int order) {
    validate_order(order);
    const auto& w = stehfest_weights(order);
    const auto& w_lo = stehfest_weights(order - 2);
    const long double ln2 = 0.693147180559945309417232121458L;
    const long double scale = ln2 / static_cast<long double>(t);
    long double full = 0.0L, reduced = 0.0L;
    for (int k = 1; k <= order; ++k) {
        long double fv = transform(k * scale);
        full += w[k - 1] * fv;
        if (k <= order - 2) reduced += w_lo[k - 1] * fv;
    }
    full *= scale;
    reduced *= scale;
    return {static_cast<double>(full), static_cast<double>(std::fabs(full - reduced))};
}

} // namespace gfc::invlap
