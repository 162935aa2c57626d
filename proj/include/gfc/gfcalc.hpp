#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"

#include "gfc/bernstein.hpp"
#include "gfc/invlap.hpp"

namespace gfc {

// Function sampled on the uniform grid t_i = i * step, i = 0..size()-1.
struct SampledFunction {
    SampledFunction(double step_in, std::vector<double> values_in);
    // validates that the explicit grid starts at 0 and is uniform to 1e-12
    SampledFunction(const std::vector<double>& times, std::vector<double> values_in);

    double step;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t i) const { return static_cast<double>(i) * step; }
};

// Residuals of a governing identity over a grid, with the verdict.
struct ResidualReport {
    std::vector<double> times;
    std::vector<double> residuals;
    double max_abs = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    nlohmann::json to_json() const;
};

// Product-integration weights for the convolution-type derivative of one
// exponent on one uniform grid: the derivative samples are interpolated
// piecewise-linearly and integrated against exact per-cell moments of the
// Lévy tail.
class ConvolutionKernel {
public:
    ConvolutionKernel(const BernsteinSpec& spec, double step, std::size_t ncells);

    // sum_{j<i} d[i-j] m_end[j] + d[i-j-1] m_start[j] + drift * d[i]
    double apply(const std::vector<double>& diffs, std::size_t i) const;

    double step() const { return step_; }
    std::size_t ncells() const { return m_end_.size(); }

private:
    double step_;
    double drift_;
    std::vector<double> m_end_, m_start_;
};

// centered differences inside, one-sided at the two ends
std::vector<double> difference_samples(const SampledFunction& u);

inline constexpr std::size_t kMinConvCells = 8;

// Caputo-Djrbashian-type derivative b u'(t) + int_0^t u'(t-s) nu(s) ds at
// grid index i (i >= kMinConvCells).
double cd_derivative(const BernsteinSpec& spec, const SampledFunction& u, std::size_t index);

// Riemann-Liouville-type variant: cd_derivative + nu(t) u(0).
double rl_derivative(const BernsteinSpec& spec, const SampledFunction& u, std::size_t index);

// cd_derivative at every admissible index (entries below kMinConvCells are NaN)
std::vector<double> cd_derivative_all(const BernsteinSpec& spec, const SampledFunction& u);

struct EigenOptions {
    double min_t = 0.05;      // residuals reported for t >= min_t
    double tolerance = 5e-3;
    int order = invlap::kDefaultOrder;
};

// Residual of the eigenfunction identity: cd applied to tilde_ell(., lambda)
// plus lambda tilde_ell, on the grid i*step, i = 0..npoints.
ResidualReport eigen_residual(const BernsteinSpec& spec, double lambda, double step,
                              std::size_t npoints, const EigenOptions& options = {});

} // namespace gfc
