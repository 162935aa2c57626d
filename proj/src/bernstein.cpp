#include "gfc/bernstein.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gfc/errors.hpp"

namespace gfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr SignedLog kZeroLog{-std::numeric_limits<double>::infinity(), 0};

SignedLog signed_log(double v) {
    if (v == 0.0) return kZeroLog;
    return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
}

// int_0^inf e^{-x s} tail(s) ds, split at 1 so tanh_sinh absorbs an
// integrable singularity of the tail at 0
double laplace_of_tail(const std::function<double(double)>& tail, double x, int extra_power,
                       double x_factor) {
    auto g = [&](double s) {
        double p = x_factor * std::exp(-x * s) * tail(s);
        for (int i = 0; i < extra_power; ++i) p *= s;
        return p;
    };
    boost::math::quadrature::tanh_sinh<double> inner;
    boost::math::quadrature::exp_sinh<double> outer;
    double head = inner.integrate(g, 0.0, 1.0);
    auto shifted = [&](double s) { return g(s + 1.0); };
    double rest = outer.integrate(shifted);
    return head + rest;
}

} // namespace

BernsteinSpec BernsteinSpec::stable(double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw ParameterError("stable exponent requires alpha in (0,1]");
    BernsteinSpec s;
    s.family_ = Family::stable;
    s.params_ = Stable{alpha};
    return s;
}

BernsteinSpec BernsteinSpec::compound_poisson_gamma(double rate, double shape, double scale) {
    if (!(rate > 0.0) || !(shape > 0.0) || !(scale > 0.0))
        throw ParameterError("compound Poisson-Gamma exponent requires positive (rate, shape, scale)");
    BernsteinSpec s;
    s.family_ = Family::cpgamma;
    s.params_ = CpGamma{rate, shape, scale};
    return s;
}

BernsteinSpec BernsteinSpec::compound_poisson_exp(double rate, double scale) {
    if (!(rate > 0.0) || !(scale > 0.0))
        throw ParameterError("compound Poisson-exponential exponent requires positive (rate, scale)");
    BernsteinSpec s;
    s.family_ = Family::cpexp;
    s.params_ = CpExp{rate, scale};
    return s;
}

BernsteinSpec BernsteinSpec::pure_drift(double b) {
    if (!(b > 0.0)) throw ParameterError("pure drift exponent requires b > 0");
    BernsteinSpec s;
    s.family_ = Family::drift;
    s.params_ = Drift{b};
    return s;
}

BernsteinSpec BernsteinSpec::sum_of(std::vector<BernsteinSpec> components) {
    if (components.empty()) throw ParameterError("sum of exponents requires at least one component");
    BernsteinSpec s;
    s.family_ = Family::sum;
    s.components_ = std::move(components);
    return s;
}

BernsteinSpec BernsteinSpec::custom(double a, double b, std::function<double(double)> tail,
                                    bool density_ok) {
    if (a < 0.0 || b < 0.0) throw ParameterError("custom exponent requires a, b >= 0");
    if (!tail) throw ParameterError("custom exponent requires a tail function");
    BernsteinSpec s;
    s.family_ = Family::custom;
    s.params_ = Custom{a, b, std::move(tail), density_ok};
    return s;
}

const BernsteinSpec::Stable& BernsteinSpec::as_stable() const {
    if (family_ != Family::stable) throw ParameterError("spec is not a stable exponent");
    return std::get<Stable>(params_);
}
const BernsteinSpec::CpGamma& BernsteinSpec::as_cpgamma() const {
    if (family_ != Family::cpgamma) throw ParameterError("spec is not a compound Poisson-Gamma exponent");
    return std::get<CpGamma>(params_);
}
const BernsteinSpec::CpExp& BernsteinSpec::as_cpexp() const {
    if (family_ != Family::cpexp) throw ParameterError("spec is not a compound Poisson-exponential exponent");
    return std::get<CpExp>(params_);
}
const BernsteinSpec::Drift& BernsteinSpec::as_drift() const {
    if (family_ != Family::drift) throw ParameterError("spec is not a pure drift exponent");
    return std::get<Drift>(params_);
}
const BernsteinSpec::Custom& BernsteinSpec::as_custom() const {
    if (family_ != Family::custom) throw ParameterError("spec is not a custom exponent");
    return std::get<Custom>(params_);
}
const std::vector<BernsteinSpec>& BernsteinSpec::components() const {
    if (family_ != Family::sum) throw ParameterError("spec is not a sum of exponents");
    return components_;
}

double BernsteinSpec::eval(double x) const {
    if (!(x >= 0.0)) throw ParameterError("eval requires x >= 0");
    return static_cast<double>(eval_ld(static_cast<long double>(x)));
}

long double BernsteinSpec::eval_ld(long double x) const {
    if (!(x >= 0.0L)) throw ParameterError("eval requires x >= 0");
    switch (family_) {
        case Family::stable: {
            const auto& p = std::get<Stable>(params_);
            return powl(x, static_cast<long double>(p.alpha));
        }
        case Family::cpgamma: {
            const auto& p = std::get<CpGamma>(params_);
            // rate * (1 - (beta/(beta+x))^shape), written via expm1 for small x
            long double e = -static_cast<long double>(p.shape) * log1pl(x / static_cast<long double>(p.scale));
            return -static_cast<long double>(p.rate) * expm1l(e);
        }
        case Family::cpexp: {
            const auto& p = std::get<CpExp>(params_);
            return static_cast<long double>(p.rate) * x / (static_cast<long double>(p.scale) + x);
        }
        case Family::drift:
            return static_cast<long double>(std::get<Drift>(params_).b) * x;
        case Family::sum: {
            long double acc = 0.0L;
            for (const auto& c : components_) acc += c.eval_ld(x);
            return acc;
        }
        case Family::custom: {
            const auto& p = std::get<Custom>(params_);
            if (x == 0.0L) return static_cast<long double>(p.a);
            double xd = static_cast<double>(x);
            return static_cast<long double>(p.a + p.b * xd + laplace_of_tail(p.tail, xd, 0, xd));
        }
    }
    return 0.0L;
}

SignedLog BernsteinSpec::log_derivative(int m, double x) const {
    if (m < 0) throw ParameterError("derivative order must be nonnegative");
    if (m == 0) return signed_log(eval(x));
    if (!(x >= 0.0)) throw ParameterError("derivative requires x >= 0");
    switch (family_) {
        case Family::stable: {
            if (m > kDerivativeCap) throw UnsupportedError("derivative order beyond cap");
            const auto& p = std::get<Stable>(params_);
            if (p.alpha == 1.0) return m == 1 ? SignedLog{0.0, 1} : kZeroLog;
            if (x == 0.0) throw ParameterError("stable exponent derivative diverges at x = 0");
            // |f^(m)(x)| = alpha * Gamma(m-alpha)/Gamma(1-alpha) * x^{alpha-m}
            double la = std::log(p.alpha) + std::lgamma(m - p.alpha) - std::lgamma(1.0 - p.alpha) +
                        (p.alpha - m) * std::log(x);
            return {la, (m % 2 == 1) ? 1 : -1};
        }
        case Family::cpgamma: {
            if (m > kDerivativeCap) throw UnsupportedError("derivative order beyond cap");
            const auto& p = std::get<CpGamma>(params_);
            double la = std::log(p.rate) + p.shape * std::log(p.scale) + std::lgamma(p.shape + m) -
                        std::lgamma(p.shape) - (p.shape + m) * std::log(p.scale + x);
            return {la, (m % 2 == 1) ? 1 : -1};
        }
        case Family::cpexp: {
            if (m > kDerivativeCap) throw UnsupportedError("derivative order beyond cap");
            const auto& p = std::get<CpExp>(params_);
            double la = std::log(p.rate) + std::log(p.scale) + std::lgamma(m + 1.0) -
                        (m + 1.0) * std::log(p.scale + x);
            return {la, (m % 2 == 1) ? 1 : -1};
        }
        case Family::drift: {
            if (m > kDerivativeCap) throw UnsupportedError("derivative order beyond cap");
            if (m == 1) return {std::log(std::get<Drift>(params_).b), 1};
            return kZeroLog;
        }
        case Family::sum: {
            // all components share the completely-monotone sign (-1)^{m+1}
            double max_la = -kInf;
            std::vector<double> las;
            las.reserve(components_.size());
            for (const auto& c : components_) {
                SignedLog sl = c.log_derivative(m, x);
                if (sl.sign == 0) continue;
                las.push_back(sl.log_abs);
                max_la = std::max(max_la, sl.log_abs);
            }
            if (las.empty()) return kZeroLog;
            double acc = 0.0;
            for (double la : las) acc += std::exp(la - max_la);
            return {max_la + std::log(acc), (m % 2 == 1) ? 1 : -1};
        }
        case Family::custom: {
            if (m > kCustomDerivativeCap)
                throw UnsupportedError("derivative order beyond cap for custom exponent");
            const auto& p = std::get<Custom>(params_);
            // f^(m)(x) = (-1)^{m+1} int s^m e^{-xs} nubar(ds), plus b at m=1;
            // in tail form: int (m s^{m-1} - x s^m) e^{-xs} tail(s) ds
            double v = laplace_of_tail(p.tail, x, m - 1, static_cast<double>(m)) -
                       laplace_of_tail(p.tail, x, m, x);
            if (m % 2 == 0) v = -v;
            if (m == 1) v += p.b;
            return signed_log(v);
        }
    }
    return kZeroLog;
}

double BernsteinSpec::derivative(int m, double x) const {
    if (m == 0) return eval(x);
    SignedLog sl = log_derivative(m, x);
    if (sl.sign == 0) return 0.0;
    return sl.sign * std::exp(sl.log_abs);
}

double BernsteinSpec::levy_tail(double s) const {
    if (!(s > 0.0)) throw ParameterError("levy_tail requires s > 0");
    switch (family_) {
        case Family::stable: {
            const auto& p = std::get<Stable>(params_);
            if (p.alpha == 1.0) return 0.0;
            return std::pow(s, -p.alpha) / std::tgamma(1.0 - p.alpha);
        }
        case Family::cpgamma: {
            const auto& p = std::get<CpGamma>(params_);
            return p.rate * boost::math::gamma_q(p.shape, p.scale * s);
        }
        case Family::cpexp: {
            const auto& p = std::get<CpExp>(params_);
            return p.rate * std::exp(-p.scale * s);
        }
        case Family::drift:
            return 0.0;
        case Family::sum: {
            double acc = 0.0;
            for (const auto& c : components_) acc += c.levy_tail(s);
            return acc;
        }
        case Family::custom: {
            const auto& p = std::get<Custom>(params_);
            return p.a + p.tail(s);
        }
    }
    return 0.0;
}

double BernsteinSpec::levy_tail_integral(double s0, double s1) const {
    if (!(s0 >= 0.0) || !(s1 >= s0)) throw ParameterError("levy_tail_integral requires 0 <= s0 <= s1");
    if (s0 == s1) return 0.0;
    switch (family_) {
        case Family::stable: {
            const auto& p = std::get<Stable>(params_);
            if (p.alpha == 1.0) return 0.0;
            return (std::pow(s1, 1.0 - p.alpha) - std::pow(s0, 1.0 - p.alpha)) /
                   std::tgamma(2.0 - p.alpha);
        }
        case Family::cpgamma: {
            const auto& p = std::get<CpGamma>(params_);
            auto primitive = [&](double y) {
                if (y == 0.0) return 0.0;
                return y * boost::math::gamma_q(p.shape, y) +
                       p.shape * boost::math::gamma_p(p.shape + 1.0, y);
            };
            return p.rate / p.scale * (primitive(p.scale * s1) - primitive(p.scale * s0));
        }
        case Family::cpexp: {
            const auto& p = std::get<CpExp>(params_);
            return p.rate / p.scale * (std::exp(-p.scale * s0) - std::exp(-p.scale * s1));
        }
        case Family::drift:
            return 0.0;
        case Family::sum: {
            double acc = 0.0;
            for (const auto& c : components_) acc += c.levy_tail_integral(s0, s1);
            return acc;
        }
        case Family::custom: {
            const auto& p = std::get<Custom>(params_);
            boost::math::quadrature::tanh_sinh<double> integ;
            double v = integ.integrate([&](double s) { return p.tail(s); }, s0, s1);
            return v + p.a * (s1 - s0);
        }
    }
    return 0.0;
}

double BernsteinSpec::levy_tail_first_moment(double s0, double s1) const {
    if (!(s0 >= 0.0) || !(s1 >= s0))
        throw ParameterError("levy_tail_first_moment requires 0 <= s0 <= s1");
    if (s0 == s1) return 0.0;
    switch (family_) {
        case Family::stable: {
            const auto& p = std::get<Stable>(params_);
            if (p.alpha == 1.0) return 0.0;
            return (std::pow(s1, 2.0 - p.alpha) - std::pow(s0, 2.0 - p.alpha)) /
                   ((2.0 - p.alpha) * std::tgamma(1.0 - p.alpha));
        }
        case Family::cpgamma: {
            const auto& p = std::get<CpGamma>(params_);
            auto primitive = [&](double y) {
                if (y == 0.0) return 0.0;
                return 0.5 * y * y * boost::math::gamma_q(p.shape, y) +
                       0.5 * p.shape * (p.shape + 1.0) * boost::math::gamma_p(p.shape + 2.0, y);
            };
            double inv = 1.0 / (p.scale * p.scale);
            return p.rate * inv * (primitive(p.scale * s1) - primitive(p.scale * s0));
        }
        case Family::cpexp: {
            const auto& p = std::get<CpExp>(params_);
            auto primitive = [&](double s) {
                return -(s / p.scale + 1.0 / (p.scale * p.scale)) * std::exp(-p.scale * s);
            };
            return p.rate * (primitive(s1) - primitive(s0));
        }
        case Family::drift:
            return 0.0;
        case Family::sum: {
            double acc = 0.0;
            for (const auto& c : components_) acc += c.levy_tail_first_moment(s0, s1);
            return acc;
        }
        case Family::custom: {
            const auto& p = std::get<Custom>(params_);
            boost::math::quadrature::tanh_sinh<double> integ;
            double v = integ.integrate([&](double s) { return s * p.tail(s); }, s0, s1);
            return v + p.a * 0.5 * (s1 * s1 - s0 * s0);
        }
    }
    return 0.0;
}

double BernsteinSpec::drift_part() const {
    switch (family_) {
        case Family::drift:
            return std::get<Drift>(params_).b;
        case Family::stable:
            return std::get<Stable>(params_).alpha == 1.0 ? 1.0 : 0.0;
        case Family::sum: {
            double acc = 0.0;
            for (const auto& c : components_) acc += c.drift_part();
            return acc;
        }
        case Family::custom:
            return std::get<Custom>(params_).b;
        default:
            return 0.0;
    }
}

double BernsteinSpec::kill_part() const {
    switch (family_) {
        case Family::custom:
            return std::get<Custom>(params_).a;
        case Family::sum: {
            double acc = 0.0;
            for (const auto& c : components_) acc += c.kill_part();
            return acc;
        }
        default:
            return 0.0;
    }
}

bool BernsteinSpec::finite_activity() const {
    switch (family_) {
        case Family::stable:
            return std::get<Stable>(params_).alpha == 1.0;
        case Family::custom:
            return false;
        case Family::sum: {
            for (const auto& c : components_)
                if (!c.finite_activity()) return false;
            return true;
        }
        default:
            return true;
    }
}

bool BernsteinSpec::simulatable() const {
    switch (family_) {
        case Family::custom:
            return false;
        case Family::sum: {
            for (const auto& c : components_)
                if (!c.simulatable()) return false;
            return true;
        }
        default:
            return true;
    }
}

bool BernsteinSpec::density_supported() const {
    if (family_ == Family::stable) return std::get<Stable>(params_).alpha < 1.0;
    if (family_ == Family::custom) return std::get<Custom>(params_).density_ok;
    return false;
}

std::string BernsteinSpec::name() const {
    switch (family_) {
        case Family::stable:
            return "stable";
        case Family::cpgamma:
            return "cpg";
        case Family::cpexp:
            return "cpe";
        case Family::drift:
            return "drift";
        case Family::sum:
            return "sum";
        case Family::custom:
            return "custom";
    }
    return "?";
}

nlohmann::json BernsteinSpec::to_json() const {
    nlohmann::json j;
    j["family"] = name();
    switch (family_) {
        case Family::stable:
            j["params"] = {{"alpha", std::get<Stable>(params_).alpha}};
            break;
        case Family::cpgamma: {
            const auto& p = std::get<CpGamma>(params_);
            j["params"] = {{"lambda", p.rate}, {"alpha", p.shape}, {"beta", p.scale}};
            break;
        }
        case Family::cpexp: {
            const auto& p = std::get<CpExp>(params_);
            j["params"] = {{"lambda", p.rate}, {"beta", p.scale}};
            break;
        }
        case Family::drift:
            j["params"] = {{"b", std::get<Drift>(params_).b}};
            break;
        case Family::sum: {
            nlohmann::json comps = nlohmann::json::array();
            for (const auto& c : components_) comps.push_back(c.to_json());
            j["components"] = std::move(comps);
            break;
        }
        case Family::custom: {
            // tail function not serializable; metadata only
            const auto& p = std::get<Custom>(params_);
            j["params"] = {{"a", p.a}, {"b", p.b}};
            break;
        }
    }
    return j;
}

BernsteinSpec BernsteinSpec::from_json(const nlohmann::json& j) {
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "stable") return stable(j.at("params").at("alpha").get<double>());
    if (fam == "cpg")
        return compound_poisson_gamma(j.at("params").at("lambda").get<double>(),
                                      j.at("params").at("alpha").get<double>(),
                                      j.at("params").at("beta").get<double>());
    if (fam == "cpe")
        return compound_poisson_exp(j.at("params").at("lambda").get<double>(),
                                    j.at("params").at("beta").get<double>());
    if (fam == "drift") return pure_drift(j.at("params").at("b").get<double>());
    if (fam == "sum") {
        std::vector<BernsteinSpec> comps;
        for (const auto& c : j.at("components")) comps.push_back(from_json(c));
        return sum_of(std::move(comps));
    }
    if (fam == "custom")
        throw UnsupportedError("custom exponents cannot be reconstructed from JSON (tail function)");
    throw ParameterError("unknown exponent family: " + fam);
}

BernsteinSpec sum_exponents(const std::vector<BernsteinSpec>& specs) {
    return BernsteinSpec::sum_of(specs);
}

} // namespace gfc
