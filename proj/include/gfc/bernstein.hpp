#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace gfc {

enum class Family { stable, cpgamma, cpexp, drift, sum, custom };

// sign * exp(log_abs); sign == 0 means exactly zero
struct SignedLog {
    double log_abs;
    int sign;
};

// A Bernstein function f(x) = a + b x + int_0^inf (1 - e^{-xs}) nubar(ds),
// represented symbolically by family + parameters. Catalog families carry
// closed-form values, derivatives of any order up to the cap, and Lévy-tail
// cell integrals; custom specs fall back to quadrature.
class BernsteinSpec {
public:
    struct Stable {
        double alpha; // (0,1]
    };
    struct CpGamma {
        double rate;  // jump intensity lambda
        double shape; // Gamma shape alpha
        double scale; // Gamma rate beta
    };
    struct CpExp {
        double rate;  // jump intensity lambda
        double scale; // Exponential rate beta
    };
    struct Drift {
        double b;
    };
    struct Custom {
        double a;
        double b;
        std::function<double(double)> tail; // nubar(s, inf), excludes a
        bool density_ok = false;            // user asserts Condition-I-type regularity
    };

    static BernsteinSpec stable(double alpha);
    static BernsteinSpec compound_poisson_gamma(double rate, double shape, double scale);
    static BernsteinSpec compound_poisson_exp(double rate, double scale);
    static BernsteinSpec pure_drift(double b);
    static BernsteinSpec sum_of(std::vector<BernsteinSpec> components);
    static BernsteinSpec custom(double a, double b, std::function<double(double)> tail,
                                bool density_ok = false);

    Family family() const { return family_; }

    // f(x), x >= 0
    double eval(double x) const;
    long double eval_ld(long double x) const;

    // m-th derivative at x (m = 0 returns eval); exact closed forms for the
    // catalog families up to order kDerivativeCap.
    double derivative(int m, double x) const;
    SignedLog log_derivative(int m, double x) const;

    // Lévy tail nu(s) = a + nubar(s, inf), s > 0
    double levy_tail(double s) const;

    // int_{s0}^{s1} nu(s) ds and int_{s0}^{s1} s nu(s) ds, closed forms for
    // catalog families (quadrature for custom)
    double levy_tail_integral(double s0, double s1) const;
    double levy_tail_first_moment(double s0, double s1) const;

    // total drift coefficient b (summed over components)
    double drift_part() const;
    // total killing rate a
    double kill_part() const;

    // no stable component (pure drift + compound Poisson): passage times can
    // be simulated event-by-event
    bool finite_activity() const;
    // all leaves drawable as exact increments (everything but custom)
    bool simulatable() const;
    // the inverse-subordinator density path is offered for this spec
    bool density_supported() const;

    const Stable& as_stable() const;
    const CpGamma& as_cpgamma() const;
    const CpExp& as_cpexp() const;
    const Drift& as_drift() const;
    const Custom& as_custom() const;
    const std::vector<BernsteinSpec>& components() const;

    std::string name() const;

    nlohmann::json to_json() const;
    static BernsteinSpec from_json(const nlohmann::json& j);

    static constexpr int kDerivativeCap = 512;
    static constexpr int kCustomDerivativeCap = 16;

private:
    BernsteinSpec() = default;

    Family family_ = Family::drift;
    std::variant<Stable, CpGamma, CpExp, Drift, Custom> params_{Drift{1.0}};
    std::vector<BernsteinSpec> components_;
};

// Laplace exponent of a sum of independent subordinators.
BernsteinSpec sum_exponents(const std::vector<BernsteinSpec>& specs);

} // namespace gfc
