#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "gfc/bernstein.hpp"
#include "gfc/invlap.hpp"

namespace gfc {

// --- evaluation methods for the inverse-subordinator Laplace transform ----

struct ClosedFormStable {}; // E_alpha(-lambda t^alpha), stable exponents only

struct NumericalInversion {
    int order = invlap::kDefaultOrder; // even, in [8, 20]
};

struct MonteCarloTilde {
    std::size_t n = 100000;
    std::uint64_t seed = 0;
};

using TildeEllMethod = std::variant<ClosedFormStable, NumericalInversion, MonteCarloTilde>;

// t-Laplace transform of the inverse-subordinator density:
//   L_t[density(., x)](r) = f(r)/r * exp(-x f(r))
double lt_density_t(const BernsteinSpec& spec, double r, double x);

// tilde_ell(t, lambda) = E exp(-lambda Y^f(t)), the x-Laplace transform of
// the density of the inverse subordinator. The numerical route inverts
// f(r) / (r (lambda + f(r))) in t; that transform follows by integrating
// lt_density_t against exp(-lambda x) over x.
double tilde_ell(const BernsteinSpec& spec, double t, double lambda,
                 const TildeEllMethod& method = NumericalInversion{});

// closed form when the exponent is stable, numerical inversion otherwise
double tilde_ell_auto(const BernsteinSpec& spec, double t, double lambda);

struct McEstimate {
    double value;
    double stderr_est;
};
McEstimate tilde_ell_mc(const BernsteinSpec& spec, double t, double lambda, std::size_t n,
                        std::uint64_t seed);

// --- density of the inverse subordinator on a grid ------------------------

struct DensityOptions {
    int order = invlap::kDefaultOrder;
    double clamp_threshold = 1e-9; // negatives beyond this are reported, all are clamped
};

struct DensityResult {
    std::vector<double> xs;
    std::vector<double> values; // clamped at 0
    std::vector<double> raw;    // unclamped inversion output
    double max_negative = 0.0;  // most negative raw excursion (as a positive number)
};

DensityResult density_grid(const BernsteinSpec& spec, double t, std::vector<double> xs,
                           const DensityOptions& options = {});

} // namespace gfc
