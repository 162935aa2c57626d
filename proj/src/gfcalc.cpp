#include "gfc/gfcalc.hpp"

#include <cmath>
#include <limits>

#include "gfc/errors.hpp"
#include "gfc/kernels.hpp"
#include "gfc/laplace.hpp"
#include "gfc/parallel.hpp"

namespace gfc {

SampledFunction::SampledFunction(double step_in, std::vector<double> values_in)
    : step(step_in), values(std::move(values_in)) {
    if (!(step > 0.0)) throw ParameterError("SampledFunction requires step > 0");
    if (values.size() < 3) throw ParameterError("SampledFunction requires at least 3 points");
}

SampledFunction::SampledFunction(const std::vector<double>& times, std::vector<double> values_in)
    : step(0.0), values(std::move(values_in)) {
    if (times.size() != values.size())
        throw ParameterError("SampledFunction requires matching grid and value lengths");
    if (times.size() < 3) throw ParameterError("SampledFunction requires at least 3 points");
    if (times.front() != 0.0) throw ParameterError("SampledFunction grid must start at 0");
    step = times[1] - times[0];
    if (!(step > 0.0)) throw ParameterError("SampledFunction grid must be increasing");
    for (std::size_t i = 1; i < times.size(); ++i) {
        double expected = static_cast<double>(i) * step;
        if (std::fabs(times[i] - expected) > 1e-12 * std::max(1.0, std::fabs(expected)))
            throw ParameterError("SampledFunction grid must be uniform to 1e-12");
    }
}

nlohmann::json ResidualReport::to_json() const {
    return nlohmann::json{{"grid", times},
                          {"residuals", residuals},
                          {"max_abs", max_abs},
                          {"tolerance", tolerance},
                          {"pass", pass}};
}

ConvolutionKernel::ConvolutionKernel(const BernsteinSpec& spec, double step, std::size_t ncells)
    : step_(step), drift_(spec.drift_part()) {
    if (!(step > 0.0)) throw ParameterError("ConvolutionKernel requires step > 0");
    m_end_.resize(ncells);
    m_start_.resize(ncells);
    // cell j covers s in [j h, (j+1) h]; the hat weights come from the cell's
    // zeroth and first tail moments
    for (std::size_t j = 0; j < ncells; ++j) {
        double s0 = static_cast<double>(j) * step;
        double s1 = static_cast<double>(j + 1) * step;
        double i0 = spec.levy_tail_integral(s0, s1);
        double i1 = spec.levy_tail_first_moment(s0, s1);
        m_end_[j] = (s1 * i0 - i1) / step;
        m_start_[j] = (i1 - s0 * i0) / step;
    }
}

double ConvolutionKernel::apply(const std::vector<double>& diffs, std::size_t i) const {
    // sum_{j=0}^{i-1} d[i-j] m_end[j] + d[i-j-1] m_start[j]
    double conv = kern::dot_rev(m_end_.data(), diffs.data() + 1, i) +
                  kern::dot_rev(m_start_.data(), diffs.data(), i);
    return conv + drift_ * diffs[i];
}

std::vector<double> difference_samples(const SampledFunction& u) {
    const std::size_t n = u.size() - 1;
    std::vector<double> d(n + 1);
    d[0] = (u.values[1] - u.values[0]) / u.step;
    d[n] = (u.values[n] - u.values[n - 1]) / u.step;
    for (std::size_t i = 1; i < n; ++i) d[i] = (u.values[i + 1] - u.values[i - 1]) / (2.0 * u.step);
    return d;
}

namespace {

void check_index(const SampledFunction& u, std::size_t index) {
    if (index >= u.size())
        throw ParameterError("derivative index outside the sampled grid");
    if (index < kMinConvCells)
        throw ResolutionError("convolution derivative needs at least 8 cells in [0, t]");
}

} // namespace

double cd_derivative(const BernsteinSpec& spec, const SampledFunction& u, std::size_t index) {
    check_index(u, index);
    ConvolutionKernel kernel(spec, u.step, index);
    return kernel.apply(difference_samples(u), index);
}

double rl_derivative(const BernsteinSpec& spec, const SampledFunction& u, std::size_t index) {
    check_index(u, index);
    return cd_derivative(spec, u, index) + spec.levy_tail(u.time_at(index)) * u.values[0];
}

std::vector<double> cd_derivative_all(const BernsteinSpec& spec, const SampledFunction& u) {
    const std::size_t n = u.size() - 1;
    if (n < kMinConvCells)
        throw ResolutionError("convolution derivative needs at least 8 cells in [0, t]");
    ConvolutionKernel kernel(spec, u.step, n);
    std::vector<double> d = difference_samples(u);
    std::vector<double> out(u.size(), std::numeric_limits<double>::quiet_NaN());
    par::parallel_for(kMinConvCells, u.size(),
                      [&](std::size_t i) { out[i] = kernel.apply(d, i); });
    return out;
}

ResidualReport eigen_residual(const BernsteinSpec& spec, double lambda, double step,
                              std::size_t npoints, const EigenOptions& options) {
    if (!(lambda >= 0.0)) throw ParameterError("eigen_residual requires lambda >= 0");
    if (npoints < kMinConvCells)
        throw ResolutionError("eigen_residual needs at least 8 grid cells");

    std::vector<double> samples(npoints + 1);
    samples[0] = 1.0; // E exp(-lambda Y(0)) with Y(0) = 0
    par::parallel_for(1, npoints + 1, [&](std::size_t i) {
        samples[i] = lambda == 0.0
                         ? 1.0
                         : tilde_ell_auto(spec, static_cast<double>(i) * step, lambda);
    });
    SampledFunction u(step, std::move(samples));
    std::vector<double> cd = cd_derivative_all(spec, u);

    ResidualReport report;
    report.tolerance = options.tolerance;
    for (std::size_t i = kMinConvCells; i <= npoints; ++i) {
        double t = u.time_at(i);
        if (t + 1e-15 < options.min_t) continue;
        double r = cd[i] + lambda * u.values[i];
        report.times.push_back(t);
        report.residuals.push_back(r);
        report.max_abs = std::max(report.max_abs, std::fabs(r));
    }
    report.pass = report.max_abs <= options.tolerance;
    return report;
}

} // namespace gfc
