#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "gfc/bernstein.hpp"
#include "gfc/errors.hpp"

using namespace gfc;

namespace {

std::vector<BernsteinSpec> catalog() {
    return {
        BernsteinSpec::stable(0.5),
        BernsteinSpec::stable(0.8),
        BernsteinSpec::compound_poisson_exp(2.0, 1.0),
        BernsteinSpec::compound_poisson_gamma(2.0, 1.5, 0.5),
        BernsteinSpec::pure_drift(1.0),
        sum_exponents({BernsteinSpec::stable(0.5), BernsteinSpec::compound_poisson_exp(2.0, 1.0)}),
    };
}

} // namespace

TEST_CASE("eval of the catalog families") {
    CHECK(BernsteinSpec::stable(0.5).eval(4.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(BernsteinSpec::compound_poisson_exp(2.0, 1.0).eval(1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(BernsteinSpec::pure_drift(2.5).eval(3.0) == doctest::Approx(7.5).epsilon(1e-14));
    // frozen high-precision values for the compound Poisson-Gamma exponent
    auto cpg = BernsteinSpec::compound_poisson_gamma(2.0, 1.5, 0.5);
    CHECK(cpg.eval(1.0) == doctest::Approx(1.61509982054024949).epsilon(1e-14));
    CHECK(cpg.eval(0.3) == doctest::Approx(1.01178823119738146).epsilon(1e-14));
    for (const auto& spec : catalog()) CHECK(spec.eval(0.0) == 0.0);
}

TEST_CASE("eval is nondecreasing on an increasing grid") {
    for (const auto& spec : catalog()) {
        double prev = spec.eval(0.0);
        for (int i = 1; i <= 40; ++i) {
            double cur = spec.eval(0.25 * i);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("derivatives: closed forms") {
    CHECK(BernsteinSpec::stable(0.5).derivative(1, 4.0) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(BernsteinSpec::compound_poisson_exp(2.0, 1.0).derivative(1, 0.0) ==
          doctest::Approx(2.0).epsilon(1e-13));
    auto cpg = BernsteinSpec::compound_poisson_gamma(2.0, 1.5, 0.5);
    CHECK(cpg.derivative(1, 1.0) == doctest::Approx(0.38490017945975051).epsilon(1e-12));
    CHECK(cpg.derivative(2, 1.0) == doctest::Approx(-0.641500299099584183).epsilon(1e-12));
    CHECK(cpg.derivative(3, 0.7) == doctest::Approx(4.08572100203931541).epsilon(1e-12));
    for (const auto& spec : catalog())
        CHECK(spec.derivative(0, 1.0) == doctest::Approx(spec.eval(1.0)).epsilon(1e-14));

    // zero high-order derivatives of the drift exponent
    CHECK(BernsteinSpec::pure_drift(3.0).derivative(1, 1.0) == doctest::Approx(3.0));
    CHECK(BernsteinSpec::pure_drift(3.0).derivative(2, 1.0) == 0.0);
    CHECK(BernsteinSpec::stable(1.0).derivative(2, 1.0) == 0.0);
}

TEST_CASE("complete monotonicity signs at sampled points") {
    for (const auto& spec : catalog()) {
        for (int i = 1; i <= 20; ++i) {
            double x = 0.1 + (10.0 - 0.1) * (i - 1) / 19.0;
            for (int m = 1; m <= 4; ++m) {
                double sign = (m % 2 == 1) ? 1.0 : -1.0;
                CHECK(sign * spec.derivative(m, x) >= -1e-12);
            }
        }
    }
}

TEST_CASE("derivative order cap") {
    auto spec = BernsteinSpec::stable(0.5);
    CHECK_NOTHROW(spec.derivative(64, 1.0));
    CHECK_NOTHROW(spec.derivative(BernsteinSpec::kDerivativeCap, 1.0));
    CHECK_THROWS_AS(spec.derivative(BernsteinSpec::kDerivativeCap + 1, 1.0), UnsupportedError);
}

TEST_CASE("levy tails") {
    CHECK(BernsteinSpec::stable(0.5).levy_tail(1.0) ==
          doctest::Approx(0.56418958354775629).epsilon(1e-13));
    auto cpe = BernsteinSpec::compound_poisson_exp(2.0, 1.0);
    CHECK(cpe.levy_tail(1e-12) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(cpe.levy_tail(2.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-13));
    auto cpg = BernsteinSpec::compound_poisson_gamma(2.0, 1.5, 0.5);
    CHECK(cpg.levy_tail(1.0) == doctest::Approx(1.6025039138024016).epsilon(1e-12));
    CHECK(cpg.levy_tail(4.0) == doctest::Approx(0.522928259898221244).epsilon(1e-12));

    // the killing rate is 0 for the whole catalog: finite-activity tails are
    // exponentially dead far out, the stable tail follows its power law
    CHECK(cpe.levy_tail(1e9) <= 1e-12);
    CHECK(cpg.levy_tail(1e9) <= 1e-12);
    CHECK(BernsteinSpec::pure_drift(1.0).levy_tail(1e9) == 0.0);
    CHECK(BernsteinSpec::stable(0.5).levy_tail(1e9) ==
          doctest::Approx(std::pow(1e9, -0.5) / std::tgamma(0.5)).epsilon(1e-13));

    for (const auto& spec : catalog()) {
        double prev = spec.levy_tail(0.01);
        for (int i = 1; i <= 30; ++i) {
            double cur = spec.levy_tail(0.01 + 0.33 * i);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("tail cell integrals match quadrature oracles") {
    auto cpg = BernsteinSpec::compound_poisson_gamma(2.0, 1.5, 0.5);
    CHECK(cpg.levy_tail_integral(0.2, 0.9) == doctest::Approx(1.2680876739787416).epsilon(1e-12));
    CHECK(cpg.levy_tail_first_moment(0.2, 0.9) ==
          doctest::Approx(0.684847694210095178).epsilon(1e-12));
    auto cpe = BernsteinSpec::compound_poisson_exp(2.0, 1.0);
    CHECK(cpe.levy_tail_integral(0.2, 0.9) == doctest::Approx(0.824322186674765494).epsilon(1e-12));
    CHECK(cpe.levy_tail_first_moment(0.2, 0.9) ==
          doctest::Approx(0.419989100372879836).epsilon(1e-12));
    // stable cell with the singular endpoint, against the closed antiderivative
    auto st = BernsteinSpec::stable(0.5);
    CHECK(st.levy_tail_integral(0.0, 1.0) ==
          doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-13));
}

TEST_CASE("sum specs are componentwise additive") {
    auto a = BernsteinSpec::stable(0.5);
    auto b = BernsteinSpec::compound_poisson_exp(2.0, 1.0);
    auto s = sum_exponents({a, b});
    std::mt19937_64 gen(19);
    std::uniform_real_distribution<double> dist(0.05, 8.0);
    for (int i = 0; i < 25; ++i) {
        double x = dist(gen);
        CHECK(s.eval(x) == doctest::Approx(a.eval(x) + b.eval(x)).epsilon(1e-12));
        for (int m = 1; m <= 3; ++m)
            CHECK(s.derivative(m, x) ==
                  doctest::Approx(a.derivative(m, x) + b.derivative(m, x)).epsilon(1e-12));
        CHECK(s.levy_tail(x) == doctest::Approx(a.levy_tail(x) + b.levy_tail(x)).epsilon(1e-12));
    }
    CHECK(s.derivative(1, 1.0) == doctest::Approx(1.0).epsilon(1e-13)); // 0.5 + 0.5

    auto singleton = sum_exponents({a});
    for (int i = 0; i < 20; ++i) {
        double x = dist(gen);
        CHECK(singleton.eval(x) == doctest::Approx(a.eval(x)).epsilon(1e-14));
    }

    // two equal stable components double the evaluation
    auto twice = sum_exponents({a, a});
    CHECK(twice.eval(4.0) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("custom spec via the exponential tail reproduces the closed family") {
    auto ref = BernsteinSpec::compound_poisson_exp(2.0, 1.0);
    auto cus = BernsteinSpec::custom(0.0, 0.0, [](double s) { return 2.0 * std::exp(-s); });
    for (double x : {0.3, 1.0, 4.0}) {
        CHECK(cus.eval(x) == doctest::Approx(ref.eval(x)).epsilon(1e-9));
        CHECK(cus.derivative(1, x) == doctest::Approx(ref.derivative(1, x)).epsilon(1e-8));
        CHECK(cus.derivative(2, x) == doctest::Approx(ref.derivative(2, x)).epsilon(1e-8));
    }
    CHECK(cus.levy_tail(1.0) == doctest::Approx(ref.levy_tail(1.0)).epsilon(1e-12));
    CHECK(cus.levy_tail_integral(0.2, 0.9) ==
          doctest::Approx(ref.levy_tail_integral(0.2, 0.9)).epsilon(1e-9));
    // a custom killing rate shifts the tail uniformly
    auto killed = BernsteinSpec::custom(0.25, 0.0, [](double s) { return std::exp(-s); });
    CHECK(killed.eval(0.0) == doctest::Approx(0.25));
    CHECK(killed.levy_tail(30.0) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(BernsteinSpec::stable(0.0), ParameterError);
    CHECK_THROWS_AS(BernsteinSpec::stable(1.2), ParameterError);
    CHECK_THROWS_AS(BernsteinSpec::compound_poisson_exp(-1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(BernsteinSpec::pure_drift(0.0), ParameterError);
    CHECK_THROWS_AS(sum_exponents({}), ParameterError);
    CHECK_THROWS_AS(BernsteinSpec::stable(0.5).eval(-1.0), ParameterError);
    CHECK_THROWS_AS(BernsteinSpec::stable(0.5).derivative(1, 0.0), ParameterError);
    CHECK_THROWS_AS(BernsteinSpec::stable(0.5).levy_tail(0.0), ParameterError);
}

TEST_CASE("json round trip") {
    auto spec = sum_exponents({BernsteinSpec::stable(0.6),
                               BernsteinSpec::compound_poisson_gamma(1.0, 2.0, 3.0)});
    auto back = BernsteinSpec::from_json(spec.to_json());
    for (double x : {0.1, 1.0, 5.0})
        CHECK(back.eval(x) == doctest::Approx(spec.eval(x)).epsilon(1e-15));
    CHECK(back.to_json() == spec.to_json());
    CHECK_THROWS_AS(BernsteinSpec::from_json({{"family", "custom"}, {"params", {{"a", 0.0}, {"b", 1.0}}}}),
                    UnsupportedError);
}
