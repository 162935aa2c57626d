#pragma once

#include <array>
#include <cstdint>

namespace gfc {

// Counter-based stream RNG (Philox4x32-10). A stream is addressed by
// (seed, stream_id); identical addresses reproduce identical draws, and
// distinct stream ids use disjoint counter blocks, so parallel batches are
// reproducible regardless of scheduling.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    // uniform on (0,1), never returns an exact endpoint
    double uniform();

    double exponential(double rate);

    // standard normal (Box-Muller, one value cached)
    double normal();

    // Gamma(shape, rate), Marsaglia-Tsang with the shape<1 boost
    double gamma(double shape, double rate);

    std::uint64_t poisson(double mean);

    // one-sided alpha-stable with E exp(-s X) = exp(-s^alpha), alpha in (0,1)
    double stable_positive(double alpha);

private:
    std::array<std::uint32_t, 4> next_block();

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int block_pos_ = 4; // consumed
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

namespace detail {
// Raw Philox4x32-10 block function, exposed for the known-answer test.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& ctr,
                                        const std::array<std::uint32_t, 2>& key);
} // namespace detail

} // namespace gfc
