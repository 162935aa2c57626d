#include "gfc/invlap.hpp"

#include <array>
#include <map>
#include <mutex>

#include "gfc/errors.hpp"

namespace gfc::invlap {

namespace {

// exact factorials up to 20! (all below 2^62, representable exactly)
constexpr std::array<long double, 21> kFact = [] {
    std::array<long double, 21> f{};
    f[0] = 1.0L;
    for (int i = 1; i <= 20; ++i) f[i] = f[i - 1] * i;
    return f;
}();

std::vector<long double> make_weights(int order) {
    const int half = order / 2;
    std::vector<long double> v(order);
    for (int k = 1; k <= order; ++k) {
        long double s = 0.0L;
        int j_lo = (k + 1) / 2;
        int j_hi = k < half ? k : half;
        for (int j = j_lo; j <= j_hi; ++j) {
            long double num = 1.0L;
            for (int p = 0; p < half; ++p) num *= j; // j^half
            num *= kFact[2 * j];
            long double den = kFact[half - j] * kFact[j] * kFact[j - 1] * kFact[k - j] *
                              kFact[2 * j - k];
            s += num / den;
        }
        v[k - 1] = ((half + k) % 2 == 0 ? 1.0L : -1.0L) * s;
    }
    return v;
}

} // namespace

void validate_order(int order) {
    if (order < kMinOrder || order > kMaxOrder || order % 2 != 0)
        throw ParameterError("inversion order must be even and within [8, 20]");
}

const std::vector<long double>& stehfest_weights(int order) {
    // the order-minus-two error estimate needs weights slightly below the
    // public method floor
    if (order < 2 || order > kMaxOrder || order % 2 != 0)
        throw ParameterError("stehfest_weights requires an even order within [2, 20]");
    static std::mutex mutex;
    static std::map<int, std::vector<long double>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_weights(order)).first;
    return it->second;
}

} // namespace gfc::invlap
