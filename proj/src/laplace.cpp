#include "gfc/laplace.hpp"

#include <cmath>

#include "gfc/errors.hpp"
#include "gfc/parallel.hpp"
#include "gfc/pathsim.hpp"
#include "gfc/specfun.hpp"

namespace gfc {

namespace {

constexpr double kInstabilityThreshold = 1e-4;

double invert_tilde_ell(const BernsteinSpec& spec, double t, double lambda, int order) {
    invlap::validate_order(order);
    const long double lam = lambda;
    auto transform = [&](long double r) {
        long double f = spec.eval_ld(r);
        return f / (r * (lam + f));
    };
    invlap::Inversion inv = invlap::invert(transform, t, order);
    if (inv.err_est > kInstabilityThreshold)
        throw AccuracyError("tilde_ell inversion unstable", inv.value, inv.err_est);
    double v = inv.value;
    if (v <= 0.0)
        throw AccuracyError("tilde_ell inversion lost all accuracy (nonpositive value)", v,
                            inv.err_est);
    return std::min(v, 1.0);
}

} // namespace

double lt_density_t(const BernsteinSpec& spec, double r, double x) {
    if (!(r > 0.0)) throw ParameterError("lt_density_t requires r > 0");
    if (!(x >= 0.0)) throw ParameterError("lt_density_t requires x >= 0");
    double f = spec.eval(r);
    return f / r * std::exp(-x * f);
}

double tilde_ell(const BernsteinSpec& spec, double t, double lambda,
                 const TildeEllMethod& method) {
    if (!(t > 0.0)) throw ParameterError("tilde_ell requires t > 0");
    if (!(lambda >= 0.0)) throw ParameterError("tilde_ell requires lambda >= 0");
    if (lambda == 0.0) return 1.0;

    if (std::holds_alternative<ClosedFormStable>(method)) {
        if (spec.family() != Family::stable)
            throw UnsupportedError("ClosedFormStable requires a stable exponent");
        double alpha = spec.as_stable().alpha;
        return specfun::mittag_leffler(alpha, -lambda * std::pow(t, alpha));
    }
    if (const auto* ni = std::get_if<NumericalInversion>(&method)) {
        return invert_tilde_ell(spec, t, lambda, ni->order);
    }
    const auto& mc = std::get<MonteCarloTilde>(method);
    return tilde_ell_mc(spec, t, lambda, mc.n, mc.seed).value;
}

double tilde_ell_auto(const BernsteinSpec& spec, double t, double lambda) {
    if (spec.family() == Family::stable)
        return tilde_ell(spec, t, lambda, ClosedFormStable{});
    return tilde_ell(spec, t, lambda, NumericalInversion{});
}

McEstimate tilde_ell_mc(const BernsteinSpec& spec, double t, double lambda, std::size_t n,
                        std::uint64_t seed) {
    if (!(t > 0.0)) throw ParameterError("tilde_ell requires t > 0");
    if (n == 0) throw ParameterError("tilde_ell Monte Carlo requires n > 0");
    std::vector<double> draws = sample_inverse_passage_batch(spec, t, n, seed,
                                                             default_refine_eps(t));
    double s = 0.0, s2 = 0.0;
    for (double y : draws) {
        double e = std::exp(-lambda * y);
        s += e;
        s2 += e * e;
    }
    double mean = s / static_cast<double>(n);
    double var = std::max(0.0, s2 / static_cast<double>(n) - mean * mean);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

DensityResult density_grid(const BernsteinSpec& spec, double t, std::vector<double> xs,
                           const DensityOptions& options) {
    if (!(t > 0.0)) throw ParameterError("density_grid requires t > 0");
    if (!spec.density_supported())
        throw UnsupportedError(
            "density_grid requires an exponent with an absolutely continuous inverse law "
            "(stable, or a custom spec flagged density_ok)");
    invlap::validate_order(options.order);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] >= 0.0)) throw ParameterError("density_grid requires nonnegative x");
        if (i > 0 && !(xs[i] > xs[i - 1]))
            throw ParameterError("density_grid requires a strictly increasing grid");
    }

    DensityResult out;
    out.xs = std::move(xs);
    out.raw.assign(out.xs.size(), 0.0);
    par::parallel_for(0, out.xs.size(), [&](std::size_t i) {
        const long double x = out.xs[i];
        auto transform = [&](long double r) {
            long double f = spec.eval_ld(r);
            return f / r * expl(-x * f);
        };
        out.raw[i] = invlap::invert(transform, t, options.order).value;
    });
    out.values = out.raw;
    for (double& v : out.values) {
        if (v < 0.0) {
            out.max_negative = std::max(out.max_negative, -v);
            v = 0.0;
        }
    }
    return out;
}

} // namespace gfc
