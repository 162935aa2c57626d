#include "gfc/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfc/errors.hpp"
#include "gfc/kernels.hpp"
#include "gfc/laplace.hpp"
#include "gfc/parallel.hpp"
#include "gfc/pathsim.hpp"
#include "gfc/specfun.hpp"

namespace gfc {

namespace {

constexpr double kNegClamp = 1e-12; // pmf values above -1e-12 clamp to 0

void validate_rates(const std::vector<double>& rates) {
    if (rates.empty()) throw ParameterError("GCP law requires at least one jump rate");
    for (double r : rates)
        if (!(r > 0.0)) throw ParameterError("jump rates must be positive");
}

double clamp_prob(double p) {
    if (p >= 0.0) return p;
    if (p >= -kNegClamp) return 0.0;
    throw AccuracyError("pmf entry below the negative-noise clamp", p, -p);
}

const char* method_name(PmfMethod m) {
    switch (m) {
        case PmfMethod::resolvent:
            return "resolvent";
        case PmfMethod::monte_carlo:
            return "monte_carlo";
        case PmfMethod::stable_closed_form:
            return "stable_closed_form";
    }
    return "?";
}

} // namespace

// ---------------------------------------------------------------------------
// ProcessSpec
// ---------------------------------------------------------------------------

ProcessSpec ProcessSpec::poisson(double rate) {
    if (!(rate > 0.0)) throw ParameterError("Poisson law requires a positive rate");
    return ProcessSpec{PoissonLaw{rate}, std::nullopt, std::nullopt};
}

ProcessSpec ProcessSpec::gcp(std::vector<double> rates) {
    validate_rates(rates);
    return ProcessSpec{GcpLaw{std::move(rates)}, std::nullopt, std::nullopt};
}

ProcessSpec ProcessSpec::with_inner(BernsteinSpec psi) && {
    inner = std::move(psi);
    return std::move(*this);
}

ProcessSpec ProcessSpec::with_inverse(BernsteinSpec f) && {
    inverse = std::move(f);
    return std::move(*this);
}

double ProcessSpec::total_rate() const {
    if (const auto* p = std::get_if<PoissonLaw>(&outer)) return p->rate;
    double acc = 0.0;
    for (double r : std::get<GcpLaw>(outer).rates) acc += r;
    return acc;
}

std::size_t ProcessSpec::jump_kinds() const {
    if (std::holds_alternative<PoissonLaw>(outer)) return 1;
    return std::get<GcpLaw>(outer).rates.size();
}

nlohmann::json ProcessSpec::to_json() const {
    nlohmann::json j;
    if (const auto* p = std::get_if<PoissonLaw>(&outer)) {
        j["outer"] = {{"law", "poisson"}, {"rate", p->rate}};
    } else {
        j["outer"] = {{"law", "gcp"}, {"rates", std::get<GcpLaw>(outer).rates}};
    }
    if (inner) j["psi"] = inner->to_json();
    if (inverse) j["inverse"] = inverse->to_json();
    return j;
}

ProcessSpec ProcessSpec::from_json(const nlohmann::json& j) {
    const auto& o = j.at("outer");
    ProcessSpec spec = o.at("law").get<std::string>() == "poisson"
                           ? poisson(o.at("rate").get<double>())
                           : gcp(o.at("rates").get<std::vector<double>>());
    if (j.contains("psi")) spec.inner = BernsteinSpec::from_json(j.at("psi"));
    if (j.contains("inverse")) spec.inverse = BernsteinSpec::from_json(j.at("inverse"));
    return spec;
}

// ---------------------------------------------------------------------------
// omega_set
// ---------------------------------------------------------------------------

std::vector<OmegaTuple> omega_set(std::uint32_t k, std::uint32_t n) {
    if (k == 0) throw ParameterError("omega_set requires k >= 1");
    std::vector<OmegaTuple> out;
    std::vector<std::uint32_t> cur(k, 0);
    // lexicographic enumeration over (x_1, ..., x_k)
    auto recurse = [&](auto&& self, std::uint32_t j, std::uint32_t rem) -> void {
        if (j == k - 1) {
            if (rem % k == 0) {
                cur[j] = rem / k;
                std::uint32_t z = 0;
                for (std::uint32_t v : cur) z += v;
                out.push_back({cur, z});
            }
            return;
        }
        const std::uint32_t size = j + 1;
        for (std::uint32_t x = 0; x <= rem / size; ++x) {
            cur[j] = x;
            self(self, j + 1, rem - size * x);
        }
        cur[j] = 0;
    };
    recurse(recurse, 0, n);
    return out;
}

// ---------------------------------------------------------------------------
// base pmfs
// ---------------------------------------------------------------------------

double poisson_pmf(double lambda, double t, std::uint64_t k) {
    if (!(lambda > 0.0)) throw ParameterError("poisson_pmf requires a positive rate");
    if (!(t >= 0.0)) throw ParameterError("poisson_pmf requires t >= 0");
    const double mean = lambda * t;
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    const double kk = static_cast<double>(k);
    return std::exp(kk * std::log(mean) - mean - std::lgamma(kk + 1.0));
}

double gcp_pmf(const std::vector<double>& rates, double t, std::uint64_t n) {
    validate_rates(rates);
    if (!(t >= 0.0)) throw ParameterError("gcp_pmf requires t >= 0");
    if (t == 0.0) return n == 0 ? 1.0 : 0.0;
    double total = 0.0;
    for (double r : rates) total += r;
    const double log_t = std::log(t);
    double acc = 0.0;
    for (const auto& tup : omega_set(static_cast<std::uint32_t>(rates.size()),
                                     static_cast<std::uint32_t>(n))) {
        double lg = -total * t;
        for (std::size_t j = 0; j < rates.size(); ++j) {
            if (tup.x[j] == 0) continue;
            double xj = tup.x[j];
            lg += xj * (std::log(rates[j]) + log_t) - std::lgamma(xj + 1.0);
        }
        acc += std::exp(lg);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// generator
// ---------------------------------------------------------------------------

double GeneratorMatrix::apply_row(const std::vector<double>& p, std::size_t n) const {
    double acc = diag * p[n];
    const std::size_t q = std::min(n, offsets.size());
    acc += kern::dot_rev(offsets.data(), p.data() + n - q, q);
    return acc;
}

double gcp_generator_coefficient(const std::vector<double>& rates, const BernsteinSpec& psi,
                                 std::uint32_t q) {
    double total = 0.0;
    for (double r : rates) total += r;
    double coeff = 0.0;
    for (const auto& tup : omega_set(static_cast<std::uint32_t>(rates.size()), q)) {
        // |psi^{(z)}(Lambda)| * prod rates_j^{x_j} / x_j!; the alternating signs
        // of the derivative and of (-rates_j)^{x_j} cancel, term by term
        SignedLog sl = psi.log_derivative(static_cast<int>(tup.z), total);
        if (sl.sign == 0) continue;
        double lg = sl.log_abs;
        for (std::size_t j = 0; j < rates.size(); ++j) {
            if (tup.x[j] == 0) continue;
            double xj = tup.x[j];
            lg += xj * std::log(rates[j]) - std::lgamma(xj + 1.0);
        }
        coeff += std::exp(lg);
    }
    return coeff;
}

GeneratorMatrix build_generator(const OuterLaw& outer, const std::optional<BernsteinSpec>& psi,
                                std::size_t nmax) {
    GeneratorMatrix g;
    g.offsets.assign(nmax, 0.0);
    if (const auto* pl = std::get_if<PoissonLaw>(&outer)) {
        if (!(pl->rate > 0.0)) throw ParameterError("Poisson law requires a positive rate");
        if (!psi) {
            g.diag = -pl->rate;
            if (nmax >= 1) g.offsets[0] = pl->rate;
            return g;
        }
        g.diag = -psi->eval(pl->rate);
        const double log_rate = std::log(pl->rate);
        for (std::size_t q = 1; q <= nmax; ++q) {
            SignedLog sl = psi->log_derivative(static_cast<int>(q), pl->rate);
            if (sl.sign == 0) continue;
            g.offsets[q - 1] =
                std::exp(sl.log_abs + static_cast<double>(q) * log_rate -
                         std::lgamma(static_cast<double>(q) + 1.0));
        }
        return g;
    }
    const auto& rates = std::get<GcpLaw>(outer).rates;
    validate_rates(rates);
    double total = 0.0;
    for (double r : rates) total += r;
    if (!psi) {
        g.diag = -total;
        for (std::size_t j = 0; j < rates.size() && j < nmax; ++j) g.offsets[j] = rates[j];
        return g;
    }
    g.diag = -psi->eval(total);
    for (std::size_t q = 1; q <= nmax; ++q)
        g.offsets[q - 1] =
            gcp_generator_coefficient(rates, *psi, static_cast<std::uint32_t>(q));
    return g;
}

// ---------------------------------------------------------------------------
// pmf cores
// ---------------------------------------------------------------------------

namespace {

// exact finite expansion of exp(t G) e_0 for the triangular Toeplitz G:
// p_n(t) = e^{diag t} sum_{m<=n} t^m/m! (N^m e_0)_n with N the off-diagonal
// (nonnegative) part
std::vector<double> expm_pmf(const GeneratorMatrix& g, double t, std::size_t nmax) {
    std::vector<double> acc(nmax + 1, 0.0);
    std::vector<double> power(nmax + 1, 0.0);
    std::vector<double> next(nmax + 1, 0.0);
    power[0] = 1.0;
    acc[0] = 1.0;
    double t_pow = 1.0; // t^m / m!
    for (std::size_t m = 1; m <= nmax; ++m) {
        t_pow *= t / static_cast<double>(m);
        // next = N * power; N entry (n, n-q) = offsets[q-1]
        for (std::size_t n = 0; n <= nmax; ++n) {
            if (n < m) {
                next[n] = 0.0;
                continue;
            }
            const std::size_t q = std::min(n, g.offsets.size());
            next[n] = kern::dot_rev(g.offsets.data(), power.data() + n - q, q);
        }
        std::swap(power, next);
        bool any = false;
        for (std::size_t n = m; n <= nmax; ++n) {
            acc[n] += t_pow * power[n];
            if (power[n] != 0.0) any = true;
        }
        if (!any) break;
    }
    const double scale = std::exp(g.diag * t);
    for (double& v : acc) v *= scale;
    return acc;
}

// per-node resolvent combination: p(t) = sum_k w_k f(r_k)/r_k
// (f(r_k) I - G)^{-1} e_0, nodes r_k = k ln2 / t
std::vector<double> resolvent_pmf(const GeneratorMatrix& g, const BernsteinSpec& f, double t,
                                  std::size_t nmax, int order) {
    const auto& w = invlap::stehfest_weights(order);
    const long double ln2 = 0.693147180559945309417232121458L;
    const long double scale = ln2 / static_cast<long double>(t);
    std::vector<long double> acc(nmax + 1, 0.0L);
    std::vector<long double> x(nmax + 1, 0.0L);
    std::vector<long double> offs(g.offsets.begin(), g.offsets.end());
    const long double diag = g.diag;
    for (int k = 1; k <= order; ++k) {
        const long double r = k * scale;
        const long double fr = f.eval_ld(r);
        const long double den = fr - diag;
        x[0] = fr / (r * den);
        for (std::size_t n = 1; n <= nmax; ++n) {
            long double s = 0.0L;
            const std::size_t q = std::min(n, offs.size());
            for (std::size_t m = 1; m <= q; ++m) s += offs[m - 1] * x[n - m];
            x[n] = s / den;
        }
        const long double wk = w[k - 1];
        for (std::size_t n = 0; n <= nmax; ++n) acc[n] += wk * x[n];
    }
    std::vector<double> out(nmax + 1);
    for (std::size_t n = 0; n <= nmax; ++n)
        out[n] = static_cast<double>(acc[n] * scale);
    return out;
}

// termwise application of the pmf-extraction operator to the Mittag-Leffler
// series: p_k(t) = x^k/k! sum_j (j+k)!/j! (-x)^j / Gamma(alpha (j+k) + 1),
// x = lambda t^alpha
std::vector<double> stable_closed_form_pmf(double lambda, double alpha, double t,
                                           std::size_t nmax) {
    const double x = lambda * std::pow(t, alpha);
    const double logx = std::log(x);
    std::vector<double> out(nmax + 1, 0.0);
    for (std::size_t k = 0; k <= nmax; ++k) {
        const double kk = static_cast<double>(k);
        long double sum = 0.0L;
        long double comp = 0.0L;
        double max_mag = 0.0;
        double prev_mag = std::numeric_limits<double>::infinity();
        bool certified = false;
        for (int j = 0; j < 10000; ++j) {
            double lm = std::lgamma(j + kk + 1.0) - std::lgamma(j + 1.0) + j * logx -
                        std::lgamma(alpha * (j + kk) + 1.0);
            double mag = std::exp(lm);
            long double term = (j % 2 == 0) ? mag : -static_cast<long double>(mag);
            long double y = term - comp;
            long double s = sum + y;
            comp = (s - sum) - y;
            sum = s;
            max_mag = std::max(max_mag, mag);
            if (mag < prev_mag && mag <= 1e-17 * std::max(1.0, std::fabs(static_cast<double>(sum)))) {
                certified = true;
                break;
            }
            prev_mag = mag;
        }
        if (!certified)
            throw AccuracyError("stable closed-form series did not converge",
                                static_cast<double>(sum), max_mag);
        double pref = std::exp(kk * logx - std::lgamma(kk + 1.0));
        out[k] = pref * static_cast<double>(sum);
    }
    return out;
}

struct McResult {
    std::vector<double> probs;
    std::vector<double> stderrs;
    double deficit;
};

McResult mc_pmf(const ProcessSpec& process, double t, std::size_t nmax, bool adaptive,
                const PmfOptions& options) {
    std::vector<std::uint64_t> draws = sample_count_batch(process, t, options.mc_draws, options.seed);
    std::size_t observed_max = 0;
    for (std::uint64_t d : draws) observed_max = std::max<std::size_t>(observed_max, d);
    const std::size_t table_max = adaptive ? std::max(nmax, observed_max) : nmax;
    std::vector<std::uint64_t> counts(std::max(table_max, observed_max) + 1, 0);
    for (std::uint64_t d : draws) ++counts[d];
    McResult res;
    res.probs.resize(table_max + 1);
    res.stderrs.resize(table_max + 1);
    const double n = static_cast<double>(options.mc_draws);
    double covered = 0.0;
    for (std::size_t i = 0; i <= table_max; ++i) {
        double p = static_cast<double>(counts[i]) / n;
        res.probs[i] = p;
        res.stderrs[i] = std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
        covered += p;
    }
    res.deficit = 1.0 - covered;
    return res;
}

PmfTable assemble(double t, std::vector<double> probs, PmfMethod method, bool capped) {
    PmfTable table;
    table.t = t;
    table.method = method_name(method);
    table.capped = capped;
    double total = 0.0;
    for (double& p : probs) {
        p = clamp_prob(p);
        total += p;
    }
    table.probs = std::move(probs);
    table.mass_deficit = 1.0 - total;
    return table;
}

} // namespace

nlohmann::json PmfTable::metadata(const ProcessSpec& process) const {
    return nlohmann::json{{"process", process.to_json()},
                          {"t", t},
                          {"method", method},
                          {"nmax", nmax()},
                          {"mass_deficit", mass_deficit},
                          {"capped", capped}};
}

PmfTable pmf_no_inverse(const ProcessSpec& process, double t, std::size_t nmax,
                        const PmfOptions& options) {
    if (process.inverse)
        throw ParameterError("pmf_no_inverse requires a process without an inverse clock");
    if (!(t >= 0.0)) throw ParameterError("pmf requires t >= 0");
    std::size_t cur = std::max<std::size_t>(nmax, 1);
    for (;;) {
        GeneratorMatrix g = build_generator(process.outer, process.inner, cur);
        std::vector<double> probs =
            t == 0.0 ? [&] {
                std::vector<double> e0(cur + 1, 0.0);
                e0[0] = 1.0;
                return e0;
            }()
                     : expm_pmf(g, t, cur);
        PmfTable table = assemble(t, std::move(probs), options.method, false);
        if (!options.adaptive || table.mass_deficit <= options.deficit_target)
            return table;
        if (cur >= options.nmax_cap) {
            table.capped = true;
            return table;
        }
        cur = std::min(options.nmax_cap, cur * 2);
    }
}

PmfTable pmf_time_changed(const ProcessSpec& process, double t, std::size_t nmax,
                          const PmfOptions& options) {
    if (!(t >= 0.0)) throw ParameterError("pmf requires t >= 0");
    if (!process.inverse) {
        // identity inverse clock: fall through to the psi-only table
        return pmf_no_inverse(process, t, nmax, options);
    }
    const BernsteinSpec& f = *process.inverse;

    if (options.method == PmfMethod::monte_carlo) {
        McResult mc = mc_pmf(process, t, nmax, options.adaptive, options);
        PmfTable table = assemble(t, std::move(mc.probs), options.method, false);
        table.stderrs = std::move(mc.stderrs);
        table.mass_deficit = mc.deficit;
        return table;
    }

    if (options.method == PmfMethod::stable_closed_form) {
        if (process.inner || !std::holds_alternative<PoissonLaw>(process.outer) ||
            f.family() != Family::stable)
            throw UnsupportedError(
                "stable_closed_form requires a plain Poisson outer law and a stable inverse "
                "exponent");
        const double lambda = std::get<PoissonLaw>(process.outer).rate;
        const double alpha = f.as_stable().alpha;
        std::size_t cur = std::max<std::size_t>(nmax, 1);
        for (;;) {
            std::vector<double> probs =
                t == 0.0 ? std::vector<double>{1.0} : stable_closed_form_pmf(lambda, alpha, t, cur);
            if (t == 0.0) probs.resize(cur + 1, 0.0);
            PmfTable table = assemble(t, std::move(probs), options.method, false);
            if (!options.adaptive || table.mass_deficit <= options.deficit_target) return table;
            if (cur >= options.nmax_cap) {
                table.capped = true;
                return table;
            }
            cur = std::min(options.nmax_cap, cur * 2);
        }
    }

    invlap::validate_order(options.inversion_order);
    std::size_t cur = std::max<std::size_t>(nmax, 1);
    for (;;) {
        std::size_t solve_n = std::min(options.nmax_cap + options.guard_rows,
                                       cur + options.guard_rows);
        GeneratorMatrix g = build_generator(process.outer, process.inner, solve_n);
        std::vector<double> probs;
        if (t == 0.0) {
            probs.assign(cur + 1, 0.0);
            probs[0] = 1.0;
        } else {
            probs = resolvent_pmf(g, f, t, solve_n, options.inversion_order);
            probs.resize(cur + 1);
        }
        PmfTable table = assemble(t, std::move(probs), options.method, false);
        if (!options.adaptive || table.mass_deficit <= options.deficit_target) return table;
        if (cur >= options.nmax_cap) {
            table.capped = true;
            return table;
        }
        cur = std::min(options.nmax_cap, cur * 2);
    }
}

// ---------------------------------------------------------------------------
// pgf
// ---------------------------------------------------------------------------

double pgf(const ProcessSpec& process, double u, double t) {
    if (!(u >= -1.0 && u <= 1.0)) throw ParameterError("pgf requires |u| <= 1");
    if (!(t > 0.0)) throw ParameterError("pgf requires t > 0");
    double arg;
    if (const auto* p = std::get_if<PoissonLaw>(&process.outer)) {
        arg = p->rate * (1.0 - u);
    } else {
        const auto& rates = std::get<GcpLaw>(process.outer).rates;
        arg = 0.0;
        double upow = 1.0;
        for (double rate : rates) {
            upow *= u;
            arg += rate * (1.0 - upow);
        }
    }
    if (process.inner) arg = process.inner->eval(arg);
    if (process.inverse) return tilde_ell_auto(*process.inverse, t, arg);
    return std::exp(-t * arg);
}

// ---------------------------------------------------------------------------
// compound Poisson-Gamma clock closed form
// ---------------------------------------------------------------------------

double gn_pmf_closed(const std::vector<double>& rates, double lambda, double alpha, double beta,
                     double t, std::uint64_t n) {
    validate_rates(rates);
    if (!(lambda > 0.0) || !(alpha > 0.0) || !(beta > 0.0))
        throw ParameterError("gn_pmf_closed requires positive clock parameters");
    if (!(t > 0.0)) throw ParameterError("gn_pmf_closed requires t > 0");
    double total = 0.0;
    for (double r : rates) total += r;
    const double w = lambda * t * std::pow(beta, alpha) / std::pow(total + beta, alpha);
    // the clock's atom at 0 carries e^{-lambda t}; it only reaches n = 0
    double acc = n == 0 ? 1.0 : 0.0;
    for (const auto& tup : omega_set(static_cast<std::uint32_t>(rates.size()),
                                     static_cast<std::uint32_t>(n))) {
        double lg = -static_cast<double>(tup.z) * std::log(total + beta);
        for (std::size_t j = 0; j < rates.size(); ++j) {
            if (tup.x[j] == 0) continue;
            double xj = tup.x[j];
            lg += xj * std::log(rates[j]) - std::lgamma(xj + 1.0);
        }
        double special;
        if (alpha == 1.0) {
            // sum_{l>=1} Gamma(z+l)/Gamma(l) w^l/l! = w Gamma(z+1) E_{1,2}^{z+1}(w)
            special = w * std::tgamma(static_cast<double>(tup.z) + 1.0) *
                      specfun::ml_three_param(1.0, 2.0, static_cast<double>(tup.z) + 1.0, w);
        } else {
            specfun::WrightParams params;
            params.upper = {{static_cast<double>(tup.z), alpha}};
            params.lower = {{0.0, alpha}};
            special = specfun::wright_psi(params, w);
        }
        acc += std::exp(lg) * special;
    }
    return std::exp(-lambda * t) * acc;
}

// ---------------------------------------------------------------------------
// governing residual
// ---------------------------------------------------------------------------

ResidualReport governing_residual(const ProcessSpec& process, double step, std::size_t npoints,
                                  std::uint64_t n, const GoverningOptions& options) {
    if (npoints < kMinConvCells)
        throw ResolutionError("governing_residual needs at least 8 grid cells");
    const std::size_t rows = static_cast<std::size_t>(n);
    const std::size_t solve_n = rows + options.guard_rows;
    GeneratorMatrix g = build_generator(process.outer, process.inner, solve_n);
    const BernsteinSpec f_eff =
        process.inverse ? *process.inverse : BernsteinSpec::pure_drift(1.0);

    // pmf rows 0..n over the grid
    std::vector<std::vector<double>> p(npoints + 1);
    p[0].assign(rows + 1, 0.0);
    p[0][0] = 1.0;
    par::parallel_for(1, npoints + 1, [&](std::size_t i) {
        const double t = static_cast<double>(i) * step;
        std::vector<double> probs;
        if (process.inverse) {
            probs = resolvent_pmf(g, f_eff, t, solve_n, options.inversion_order);
        } else {
            probs = expm_pmf(g, t, solve_n);
        }
        probs.resize(rows + 1);
        p[i] = std::move(probs);
    });

    std::vector<double> row_n(npoints + 1);
    for (std::size_t i = 0; i <= npoints; ++i) row_n[i] = p[i][rows];
    SampledFunction u(step, std::move(row_n));
    std::vector<double> cd = cd_derivative_all(f_eff, u);

    ResidualReport report;
    report.tolerance = options.tolerance;
    for (std::size_t i = kMinConvCells; i <= npoints; ++i) {
        const double t = static_cast<double>(i) * step;
        if (t + 1e-15 < options.min_t) continue;
        const double rhs = g.apply_row(p[i], rows);
        const double r = cd[i] - rhs;
        report.times.push_back(t);
        report.residuals.push_back(r);
        report.max_abs = std::max(report.max_abs, std::fabs(r));
    }
    report.pass = report.max_abs <= options.tolerance;
    return report;
}

} // namespace gfc
