#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "gfc/errors.hpp"
#include "gfc/gfcalc.hpp"
#include "gfc/laplace.hpp"

using namespace gfc;

namespace {

SampledFunction sample_fn(double step, std::size_t npoints, double (*f)(double)) {
    std::vector<double> v(npoints + 1);
    for (std::size_t i = 0; i <= npoints; ++i) v[i] = f(static_cast<double>(i) * step);
    return SampledFunction(step, std::move(v));
}

} // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(SampledFunction(0.0, {0.0, 1.0, 2.0}), ParameterError);
    CHECK_THROWS_AS(SampledFunction(0.1, {0.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(SampledFunction({0.0, 0.1, 0.25}, {0.0, 1.0, 2.0}), ParameterError);
    CHECK_THROWS_AS(SampledFunction({0.1, 0.2, 0.3}, {0.0, 1.0, 2.0}), ParameterError);
    CHECK_NOTHROW(SampledFunction({0.0, 0.1, 0.2}, {0.0, 1.0, 2.0}));

    auto u = sample_fn(0.1, 20, [](double t) { return t; });
    CHECK_THROWS_AS(cd_derivative(BernsteinSpec::stable(0.5), u, 5), ResolutionError);
    CHECK_THROWS_AS(cd_derivative(BernsteinSpec::stable(0.5), u, 40), ParameterError);
}

TEST_CASE("constants are annihilated") {
    auto u = sample_fn(0.01, 100, [](double) { return 3.0; });
    auto spec = BernsteinSpec::stable(0.5);
    for (std::size_t i : {8u, 50u, 100u})
        CHECK(cd_derivative(spec, u, i) == doctest::Approx(0.0).epsilon(1e-12));
    // the R-L variant keeps the initial value times the tail
    double t = 1.0;
    CHECK(rl_derivative(spec, u, 100) ==
          doctest::Approx(3.0 / std::tgamma(0.5)).epsilon(1e-10));
}

TEST_CASE("drift clock reduces to the ordinary derivative") {
    auto drift = BernsteinSpec::pure_drift(1.0);
    auto u = sample_fn(1e-3, 1000, [](double t) { return t * t; });
    CHECK(cd_derivative(drift, u, 1000) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(cd_derivative(drift, u, 500) == doctest::Approx(1.0).epsilon(1e-5));
    // zero tail makes both derivative types coincide
    auto w = sample_fn(1e-3, 1000, [](double t) { return std::cos(t); });
    for (std::size_t i : {8u, 400u, 1000u})
        CHECK(rl_derivative(drift, w, i) == doctest::Approx(cd_derivative(drift, w, i)));
}

TEST_CASE("centered-difference reduction is second order (Richardson)") {
    auto drift = BernsteinSpec::pure_drift(1.0);
    auto coarse = sample_fn(2e-3, 500, [](double t) { return std::sin(t); });
    auto fine = sample_fn(1e-3, 1000, [](double t) { return std::sin(t); });
    double truth = std::cos(1.0);
    double e_coarse = std::fabs(cd_derivative(drift, coarse, 500) - truth);
    double e_fine = std::fabs(cd_derivative(drift, fine, 1000) - truth);
    CHECK(e_coarse / e_fine >= 3.0); // ~4 for O(h^2)
}

TEST_CASE("fractional derivative of t against the closed form") {
    auto spec = BernsteinSpec::stable(0.5);
    auto u = sample_fn(1e-3, 1000, [](double t) { return t; });
    // d^{1/2} t = t^{1/2} / Gamma(3/2)
    CHECK(cd_derivative(spec, u, 1000) ==
          doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(2e-3));
    CHECK(cd_derivative(spec, u, 250) ==
          doctest::Approx(std::sqrt(0.25) / std::tgamma(1.5)).epsilon(2e-3));
}

TEST_CASE("linearity") {
    auto spec = BernsteinSpec::stable(0.7);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double step = 0.01;
    const std::size_t n = 64;
    std::vector<double> uv(n + 1), vv(n + 1), wv(n + 1);
    const double a = 1.3, b = -0.4;
    for (std::size_t i = 0; i <= n; ++i) {
        uv[i] = dist(gen);
        vv[i] = dist(gen);
        wv[i] = a * uv[i] + b * vv[i];
    }
    SampledFunction u(step, uv), v(step, vv), w(step, wv);
    for (std::size_t i : {8u, 33u, 64u}) {
        double lhs = cd_derivative(spec, w, i);
        double rhs = a * cd_derivative(spec, u, i) + b * cd_derivative(spec, v, i);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("derivative relation holds exactly by construction") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    auto spec = BernsteinSpec::compound_poisson_gamma(1.0, 1.5, 0.5);
    std::vector<double> vals(41);
    for (auto& v : vals) v = dist(gen);
    SampledFunction u(0.05, vals);
    for (std::size_t i : {8u, 20u, 40u}) {
        double diff = rl_derivative(spec, u, i) - cd_derivative(spec, u, i);
        CHECK(diff == doctest::Approx(spec.levy_tail(u.time_at(i)) * u.values[0]).epsilon(1e-12));
    }
}

TEST_CASE("eigen residual: drift clock is an ordinary ODE") {
    EigenOptions opt;
    opt.tolerance = 1e-4;
    auto report = eigen_residual(BernsteinSpec::pure_drift(1.0), 1.0, 1e-3, 1000, opt);
    CHECK(report.max_abs <= 1e-4);
    CHECK(report.pass);
}

TEST_CASE("eigen residual vanishes at lambda = 0") {
    auto report = eigen_residual(BernsteinSpec::stable(0.5), 0.0, 1e-3, 200, {});
    CHECK(report.max_abs <= 1e-8);
}

TEST_CASE("eigen residual for the stable clock with grid-halving decay") {
    // the acceptance suite runs the full h = 1e-3 version; use h = 2e-3 here
    EigenOptions opt;
    opt.tolerance = 5e-3;
    auto coarse = eigen_residual(BernsteinSpec::stable(0.5), 1.0, 4e-3, 250, opt);
    auto fine = eigen_residual(BernsteinSpec::stable(0.5), 1.0, 2e-3, 500, opt);
    CHECK(coarse.max_abs <= 5e-3);
    CHECK(fine.max_abs <= 5e-3);
    CHECK(coarse.max_abs / fine.max_abs >= 1.5);
}

TEST_CASE("residual report serializes") {
    auto report = eigen_residual(BernsteinSpec::stable(0.5), 1.0, 5e-3, 200, {});
    auto j = report.to_json();
    CHECK(j.contains("grid"));
    CHECK(j.contains("residuals"));
    CHECK(j.contains("max_abs"));
    CHECK(j.contains("tolerance"));
    CHECK(j.contains("pass"));
    CHECK(j["grid"].size() == j["residuals"].size());
}
