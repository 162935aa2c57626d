#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "gfc/kernels.hpp"

using namespace gfc;

namespace {

std::vector<double> random_vec(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(gen);
    return v;
}

double dot_rev_ref(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[n - 1 - i];
    return acc;
}

} // namespace

TEST_CASE("scalar kernels match naive references") {
    kern::force_isa(kern::Isa::scalar);
    std::mt19937_64 gen(7);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 129u}) {
        auto a = random_vec(gen, n);
        auto b = random_vec(gen, n);
        double ref_dot = 0.0, ref_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ref_dot += a[i] * b[i];
            ref_sum += a[i];
        }
        CHECK(kern::dot(a.data(), b.data(), n) == doctest::Approx(ref_dot).epsilon(1e-13));
        CHECK(kern::sum(a.data(), n) == doctest::Approx(ref_sum).epsilon(1e-13));
        CHECK(kern::dot_rev(a.data(), b.data(), n) ==
              doctest::Approx(dot_rev_ref(a, b, n)).epsilon(1e-13));
    }
    kern::reset_isa();
}

TEST_CASE("simd variant agrees with the scalar reference") {
    if (!kern::isa_available(kern::Isa::avx2)) {
        MESSAGE("AVX2 not available; dispatch stays scalar");
        CHECK(kern::active_isa() == kern::Isa::scalar);
        return;
    }
    std::mt19937_64 gen(11);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 33u, 100u, 255u, 1024u}) {
        auto a = random_vec(gen, n);
        auto b = random_vec(gen, n);

        kern::force_isa(kern::Isa::scalar);
        double dot_s = kern::dot(a.data(), b.data(), n);
        double rev_s = kern::dot_rev(a.data(), b.data(), n);
        double sum_s = kern::sum(a.data(), n);

        kern::force_isa(kern::Isa::avx2);
        CHECK(kern::active_isa() == kern::Isa::avx2);
        double scale = std::max(1.0, std::fabs(dot_s));
        CHECK(std::fabs(kern::dot(a.data(), b.data(), n) - dot_s) <= 1e-12 * scale);
        scale = std::max(1.0, std::fabs(rev_s));
        CHECK(std::fabs(kern::dot_rev(a.data(), b.data(), n) - rev_s) <= 1e-12 * scale);
        scale = std::max(1.0, std::fabs(sum_s));
        CHECK(std::fabs(kern::sum(a.data(), n) - sum_s) <= 1e-12 * scale);
    }
    kern::reset_isa();
}

TEST_CASE("dot_rev equals dot against the reversed operand") {
    std::mt19937_64 gen(3);
    auto a = random_vec(gen, 97);
    auto b = random_vec(gen, 97);
    std::vector<double> br(b.rbegin(), b.rend());
    CHECK(kern::dot_rev(a.data(), b.data(), 97) ==
          doctest::Approx(kern::dot(a.data(), br.data(), 97)).epsilon(1e-13));
}
