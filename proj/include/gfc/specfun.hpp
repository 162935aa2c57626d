#pragma once

#include <utility>
#include <vector>

namespace gfc::specfun {

// value with a certified absolute-error estimate
struct SeriesValue {
    double value;
    double abs_err;
};

// E_alpha(z) = sum_k z^k / Gamma(alpha k + 1), alpha in (0,1].
// Series with compensated summation while |z|^{1/alpha} <= 7; beyond that
// the alternating series cancels catastrophically (peak term is roughly
// exp(|z|^{1/alpha})) and the completely monotone spectral integral takes
// over.
double mittag_leffler(double alpha, double z);
SeriesValue mittag_leffler_detail(double alpha, double z);

// Three-parameter Mittag-Leffler
//   sum_k Gamma(gamma+k)/Gamma(gamma) * z^k / (k! Gamma(rho k + delta))
double ml_three_param(double rho, double delta, double gamma, double z);
SeriesValue ml_three_param_detail(double rho, double delta, double gamma, double z);

struct WrightParams {
    std::vector<std::pair<double, double>> upper; // (a_i, alpha_i)
    std::vector<std::pair<double, double>> lower; // (b_j, beta_j)
    void validate() const;
};

// Generalized Wright function
//   sum_k [prod Gamma(a_i + alpha_i k) / prod Gamma(b_j + beta_j k)] z^k / k!
// Reciprocal Gamma at a nonpositive integer contributes an exact 0 term.
double wright_psi(const WrightParams& params, double z);
SeriesValue wright_psi_detail(const WrightParams& params, double z);

} // namespace gfc::specfun
