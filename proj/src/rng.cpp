#include "gfc/rng.hpp"

#include <cmath>

#include "gfc/errors.hpp"

namespace gfc {

namespace detail {

namespace {
inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}
} // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& ctr,
                                        const std::array<std::uint32_t, 2>& key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    std::array<std::uint32_t, 4> x = ctr;
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(M0, x[0], hi0, lo0);
        mulhilo(M1, x[2], hi1, lo1);
        x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
        k0 += W0;
        k1 += W1;
    }
    return x;
}

} // namespace detail

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {}

std::array<std::uint32_t, 4> RngStream::next_block() {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter_),
        static_cast<std::uint32_t>(counter_ >> 32),
        static_cast<std::uint32_t>(stream_id_),
        static_cast<std::uint32_t>(stream_id_ >> 32),
    };
    std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed_),
        static_cast<std::uint32_t>(seed_ >> 32),
    };
    ++counter_;
    return detail::philox4x32(ctr, key);
}

std::uint64_t RngStream::next_u64() {
    if (block_pos_ >= 4) {
        block_ = next_block();
        block_pos_ = 0;
    }
    std::uint64_t lo = block_[block_pos_];
    std::uint64_t hi = block_[block_pos_ + 1];
    block_pos_ += 2;
    return (hi << 32) | lo;
}

double RngStream::uniform() {
    // 53 random bits, shifted into (0,1)
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
    if (!(rate > 0.0)) throw ParameterError("exponential: rate must be positive");
    return -std::log(uniform()) / rate;
}

double RngStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

double RngStream::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw ParameterError("gamma: shape and rate must be positive");
    if (shape < 1.0) {
        double u = uniform();
        return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = uniform();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

std::uint64_t RngStream::poisson(double mean) {
    if (mean < 0.0 || !std::isfinite(mean)) throw ParameterError("poisson: mean must be finite and nonnegative");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // product-of-uniforms
        double limit = std::exp(-mean);
        double prod = 1.0;
        std::uint64_t k = 0;
        for (;;) {
            prod *= uniform();
            if (prod <= limit) return k;
            ++k;
        }
    }
    // transformed rejection (PTRS, Hormann 1993)
    double b = 0.931 + 2.53 * std::sqrt(mean);
    double a = -0.059 + 0.02483 * b;
    double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    double v_r = 0.9277 - 3.6224 / (b - 2.0);
    double log_mean = std::log(mean);
    for (;;) {
        double u = uniform() - 0.5;
        double v = uniform();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        double rhs = kf * log_mean - mean - std::lgamma(kf + 1.0);
        if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
    }
}

double RngStream::stable_positive(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw ParameterError("stable_positive: alpha must lie in (0,1)");
    // Kanter's representation: X = (A(theta)/W)^{(1-alpha)/alpha},
    // A(theta) = [sin(a t)^a sin((1-a) t)^{1-a} / sin t]^{1/(1-a)}.
    double theta = 3.14159265358979323846 * uniform();
    double w = exponential(1.0);
    double st = std::sin(theta);
    double a_num = std::pow(std::sin(alpha * theta), alpha) *
                   std::pow(std::sin((1.0 - alpha) * theta), 1.0 - alpha);
    double big_a = std::pow(a_num / st, 1.0 / (1.0 - alpha));
    return std::pow(big_a / w, (1.0 - alpha) / alpha);
}

} // namespace gfc
