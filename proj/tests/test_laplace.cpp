#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gfc/errors.hpp"
#include "gfc/laplace.hpp"
#include "gfc/specfun.hpp"

using namespace gfc;

TEST_CASE("t-transform of the inverse density") {
    CHECK(lt_density_t(BernsteinSpec::pure_drift(1.0), 1.0, 2.0) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    auto st = BernsteinSpec::stable(0.5);
    CHECK(lt_density_t(st, 4.0, 0.0) == doctest::Approx(0.5).epsilon(1e-14)); // f(r)/r
    CHECK(lt_density_t(st, 4.0, 1.0) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(lt_density_t(st, 0.0, 1.0), ParameterError);
}

TEST_CASE("tilde_ell basics") {
    auto st = BernsteinSpec::stable(0.5);
    CHECK(tilde_ell(st, 1.0, 0.0) == 1.0);
    CHECK(tilde_ell(st, 1.0, 1.0, ClosedFormStable{}) ==
          doctest::Approx(0.42758357615580700).epsilon(1e-12));
    CHECK_THROWS_AS(tilde_ell(BernsteinSpec::pure_drift(1.0), 1.0, 1.0, ClosedFormStable{}),
                    UnsupportedError);
    CHECK_THROWS_AS(tilde_ell(st, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(tilde_ell(st, 1.0, 1.0, NumericalInversion{13}), ParameterError);
    CHECK_THROWS_AS(tilde_ell(st, 1.0, 1.0, NumericalInversion{22}), ParameterError);
}

TEST_CASE("drift clock inverts to a plain exponential") {
    auto drift = BernsteinSpec::pure_drift(1.0);
    CHECK(tilde_ell(drift, 2.0, 1.5, NumericalInversion{}) ==
          doctest::Approx(std::exp(-3.0)).epsilon(1e-6));
    for (double t : {0.2, 1.0, 4.0})
        for (double lam : {0.3, 1.0, 2.0})
            CHECK(std::fabs(tilde_ell(drift, t, lam, NumericalInversion{}) -
                            std::exp(-lam * t)) <= 1e-6);
}

TEST_CASE("inversion agrees with the stable closed form") {
    // the full grid is an acceptance criterion; spot-check the corners here
    for (double alpha : {0.3, 0.5, 0.8}) {
        auto spec = BernsteinSpec::stable(alpha);
        for (double t : {0.1, 1.0, 5.0}) {
            for (double lam : {0.5, 2.0}) {
                double closed = tilde_ell(spec, t, lam, ClosedFormStable{});
                double inverted = tilde_ell(spec, t, lam, NumericalInversion{});
                INFO("alpha=", alpha, " t=", t, " lambda=", lam);
                CHECK(std::fabs(closed - inverted) <= 1e-6);
            }
        }
    }
}

TEST_CASE("tilde_ell is decreasing in lambda and stays in (0,1]") {
    auto cpe = BernsteinSpec::compound_poisson_exp(1.0, 1.0);
    double prev = 1.0;
    for (double lam = 0.0; lam <= 6.0; lam += 0.5) {
        double v = tilde_ell(cpe, 1.0, lam, NumericalInversion{});
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        CHECK(v <= prev + 1e-9);
        prev = v;
    }
}

TEST_CASE("monte carlo method agrees with inversion") {
    auto spec = BernsteinSpec::stable(0.5);
    for (double lam : {0.5, 1.0}) {
        auto mc = tilde_ell_mc(spec, 1.0, lam, 30000, 99);
        double ni = tilde_ell(spec, 1.0, lam, NumericalInversion{});
        INFO("lambda=", lam, " mc=", mc.value, " ni=", ni);
        CHECK(std::fabs(mc.value - ni) <= 4.0 * mc.stderr_est);
    }
    // the variant dispatch returns the same estimate
    CHECK(tilde_ell(spec, 1.0, 1.0, MonteCarloTilde{30000, 99}) ==
          doctest::Approx(tilde_ell_mc(spec, 1.0, 1.0, 30000, 99).value));
}

TEST_CASE("density grid matches the closed half-stable form") {
    auto spec = BernsteinSpec::stable(0.5);
    DensityResult res = density_grid(spec, 1.0, {0.0, 0.5, 1.0, 2.0});
    // density(t, x) = exp(-x^2/(4t)) / sqrt(pi t)
    CHECK(res.values[0] == doctest::Approx(0.56418958354775629).epsilon(1e-7));
    CHECK(res.values[1] == doctest::Approx(0.53000706468805712).epsilon(1e-7));
    CHECK(res.values[2] == doctest::Approx(0.43939128946772240).epsilon(1e-7));
    CHECK(res.values[3] == doctest::Approx(0.20755374871029735).epsilon(1e-7));
}

TEST_CASE("density normalizes and reproduces tilde_ell") {
    auto spec = BernsteinSpec::stable(0.5);
    const double dx = 0.02;
    std::vector<double> xs;
    for (double x = 0.0; x <= 20.0 + 1e-12; x += dx) xs.push_back(x);
    DensityResult res = density_grid(spec, 1.0, xs);

    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        integral += 0.5 * dx * (res.values[i] + res.values[i + 1]);
    CHECK(std::fabs(integral - 1.0) <= 1e-4);

    const double lam = 1.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        weighted += 0.5 * dx *
                    (std::exp(-lam * xs[i]) * res.values[i] +
                     std::exp(-lam * xs[i + 1]) * res.values[i + 1]);
    CHECK(std::fabs(weighted - tilde_ell(spec, 1.0, lam, NumericalInversion{})) <= 1e-4);

    CHECK(res.max_negative <= 1e-9); // clamp threshold
}

TEST_CASE("density rejects fat-jump clocks without a density") {
    CHECK_THROWS_AS(density_grid(BernsteinSpec::compound_poisson_exp(1.0, 1.0), 1.0, {0.0, 1.0}),
                    UnsupportedError);
    CHECK_THROWS_AS(density_grid(BernsteinSpec::pure_drift(1.0), 1.0, {0.0, 1.0}),
                    UnsupportedError);
    auto half_tail = [](double s) { return std::pow(s, -0.5) / std::tgamma(0.5); };
    auto flagged = BernsteinSpec::custom(0.0, 0.0, half_tail, true);
    CHECK_NOTHROW(density_grid(flagged, 1.0, {0.5, 1.0}));
    auto unflagged = BernsteinSpec::custom(0.0, 0.0, half_tail);
    CHECK_THROWS_AS(density_grid(unflagged, 1.0, {0.5, 1.0}), UnsupportedError);
}
