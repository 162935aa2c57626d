#include "gfc/pathsim.hpp"

#include <cmath>
#include <limits>

#include "gfc/errors.hpp"
#include "gfc/parallel.hpp"

namespace gfc {

namespace {

constexpr int kMaxHorizonDoublings = 20;
constexpr std::size_t kCoarseCells = 1024;
constexpr std::uint64_t kMaxPassageEvents = 100000000ull;
constexpr std::size_t kBatchChunk = 4096;

// flattened finite-activity representation: total drift + jump mixtures
struct JumpComponent {
    double rate;
    double shape; // Gamma shape of one jump (1 for exponential jumps)
    double scale;
};

void collect_finite_activity(const BernsteinSpec& spec, double& drift,
                             std::vector<JumpComponent>& jumps) {
    switch (spec.family()) {
        case Family::drift:
            drift += spec.as_drift().b;
            return;
        case Family::stable:
            // only reachable for alpha == 1 (a unit drift)
            drift += 1.0;
            return;
        case Family::cpexp: {
            const auto& p = spec.as_cpexp();
            jumps.push_back({p.rate, 1.0, p.scale});
            return;
        }
        case Family::cpgamma: {
            const auto& p = spec.as_cpgamma();
            jumps.push_back({p.rate, p.shape, p.scale});
            return;
        }
        case Family::sum:
            for (const auto& c : spec.components()) collect_finite_activity(c, drift, jumps);
            return;
        case Family::custom:
            throw UnsupportedError("custom exponents are not simulatable");
    }
}

PassageDetail passage_event_driven(const BernsteinSpec& spec, double t, RngStream& rng,
                                   double refine_eps) {
    double drift = 0.0;
    std::vector<JumpComponent> jumps;
    collect_finite_activity(spec, drift, jumps);
    double total_rate = 0.0;
    for (const auto& j : jumps) total_rate += j.rate;

    double s = 0.0;
    double level = 0.0;
    for (std::uint64_t it = 0; it < kMaxPassageEvents; ++it) {
        double wait = total_rate > 0.0 ? rng.exponential(total_rate)
                                       : std::numeric_limits<double>::infinity();
        if (drift > 0.0) {
            double needed = (t - level) / drift;
            if (needed < wait) {
                double y = s + needed;
                return {y, t - drift * refine_eps, t + drift * refine_eps};
            }
        } else if (total_rate == 0.0) {
            throw BudgetError("degenerate exponent never crosses the level");
        }
        s += wait;
        level += drift * wait;
        // pick the jump component proportionally to its rate
        double pick = rng.uniform() * total_rate;
        std::size_t idx = 0;
        for (; idx + 1 < jumps.size(); ++idx) {
            if (pick < jumps[idx].rate) break;
            pick -= jumps[idx].rate;
        }
        double size = rng.gamma(jumps[idx].shape, jumps[idx].scale);
        if (level + size > t) {
            return {s, level, level + size};
        }
        level += size;
    }
    throw BudgetError("passage simulation exceeded the event budget");
}

PassageDetail passage_grid(const BernsteinSpec& spec, double t, RngStream& rng,
                           double refine_eps) {
    double horizon = t > 0.0 ? t : refine_eps;
    int doublings = 0;
    std::size_t ncells = kCoarseCells;
    for (;;) {
        const double dt = horizon / static_cast<double>(ncells);
        double level = 0.0;
        std::ptrdiff_t crossed = -1;
        double before = 0.0, after = 0.0;
        for (std::size_t i = 0; i < ncells; ++i) {
            double next = level + draw_increment(spec, dt, rng);
            if (next > t) {
                crossed = static_cast<std::ptrdiff_t>(i);
                before = level;
                after = next;
                break;
            }
            level = next;
        }
        if (crossed < 0) {
            if (++doublings > kMaxHorizonDoublings)
                throw BudgetError("passage simulation exhausted the horizon-doubling budget");
            horizon *= 2.0;
            continue;
        }
        if (dt <= refine_eps) {
            double lo = static_cast<double>(crossed) * dt;
            double y = lo + 0.5 * dt;
            return {y, before, after};
        }
        ncells *= 2; // unconditional re-simulation at doubled resolution
    }
}

template <class T, class DrawOne>
std::vector<T> run_batch(std::size_t n, std::uint64_t seed, DrawOne&& draw_one) {
    std::vector<T> out(n);
    const std::size_t nchunks = (n + kBatchChunk - 1) / kBatchChunk;
    par::parallel_for(0, nchunks, [&](std::size_t chunk) {
        RngStream rng(seed, chunk);
        const std::size_t lo = chunk * kBatchChunk;
        const std::size_t hi = std::min(n, lo + kBatchChunk);
        for (std::size_t i = lo; i < hi; ++i) out[i] = draw_one(rng);
    });
    return out;
}

} // namespace

double draw_increment(const BernsteinSpec& spec, double dt, RngStream& rng) {
    if (!(dt >= 0.0)) throw ParameterError("draw_increment requires dt >= 0");
    if (dt == 0.0) return 0.0;
    switch (spec.family()) {
        case Family::stable: {
            double alpha = spec.as_stable().alpha;
            if (alpha == 1.0) return dt;
            return std::pow(dt, 1.0 / alpha) * rng.stable_positive(alpha);
        }
        case Family::cpgamma: {
            const auto& p = spec.as_cpgamma();
            std::uint64_t k = rng.poisson(p.rate * dt);
            // the sum of k Gamma(shape, scale) jumps is Gamma(k shape, scale)
            return k == 0 ? 0.0 : rng.gamma(static_cast<double>(k) * p.shape, p.scale);
        }
        case Family::cpexp: {
            const auto& p = spec.as_cpexp();
            std::uint64_t k = rng.poisson(p.rate * dt);
            return k == 0 ? 0.0 : rng.gamma(static_cast<double>(k), p.scale);
        }
        case Family::drift:
            return spec.as_drift().b * dt;
        case Family::sum: {
            double acc = 0.0;
            for (const auto& c : spec.components()) acc += draw_increment(c, dt, rng);
            return acc;
        }
        case Family::custom:
            throw UnsupportedError("custom exponents are not simulatable");
    }
    return 0.0;
}

PathSample sample_subordinator_path(const BernsteinSpec& spec, double horizon, double step,
                                    RngStream& rng) {
    if (!spec.simulatable()) throw UnsupportedError("custom exponents are not simulatable");
    if (!(horizon > 0.0) || !(step > 0.0) || step > horizon)
        throw ParameterError("sample_subordinator_path requires 0 < step <= horizon");
    const auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-12));
    PathSample path{{}, {}, rng.seed(), rng.stream_id(), spec};
    path.times.resize(n + 1);
    path.values.resize(n + 1);
    path.times[0] = 0.0;
    path.values[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        path.times[i] = static_cast<double>(i) * step;
        path.values[i] = path.values[i - 1] + draw_increment(spec, step, rng);
    }
    return path;
}

double default_refine_eps(double t) { return 1e-3 * std::max(1.0, t); }

PassageDetail sample_inverse_passage_detail(const BernsteinSpec& spec, double t, RngStream& rng,
                                            double refine_eps) {
    if (!spec.simulatable()) throw UnsupportedError("custom exponents are not simulatable");
    if (!(t >= 0.0)) throw ParameterError("sample_inverse_passage requires t >= 0");
    if (!(refine_eps > 0.0)) throw ParameterError("sample_inverse_passage requires refine_eps > 0");
    if (t == 0.0) return {0.0, 0.0, std::numeric_limits<double>::infinity()};
    if (spec.finite_activity()) return passage_event_driven(spec, t, rng, refine_eps);
    return passage_grid(spec, t, rng, refine_eps);
}

double sample_inverse_passage(const BernsteinSpec& spec, double t, RngStream& rng,
                              double refine_eps) {
    return sample_inverse_passage_detail(spec, t, rng, refine_eps).y;
}

std::vector<double> sample_inverse_passage_batch(const BernsteinSpec& spec, double t,
                                                 std::size_t n, std::uint64_t seed,
                                                 double refine_eps) {
    return run_batch<double>(n, seed, [&](RngStream& rng) {
        return sample_inverse_passage(spec, t, rng, refine_eps);
    });
}

std::uint64_t sample_time_changed_count(const ProcessSpec& process, double t, RngStream& rng) {
    if (!(t >= 0.0)) throw ParameterError("sample_time_changed_count requires t >= 0");
    if (t == 0.0) return 0;
    double tau = t;
    if (process.inverse)
        tau = sample_inverse_passage(*process.inverse, t, rng, default_refine_eps(t));
    if (process.inner) tau = draw_increment(*process.inner, tau, rng);
    if (const auto* p = std::get_if<PoissonLaw>(&process.outer))
        return rng.poisson(p->rate * tau);
    const auto& rates = std::get<GcpLaw>(process.outer).rates;
    // superposition: independent streams of jump sizes j at rates[j-1]
    std::uint64_t count = 0;
    for (std::size_t j = 0; j < rates.size(); ++j)
        count += (j + 1) * rng.poisson(rates[j] * tau);
    return count;
}

std::vector<std::uint64_t> sample_count_batch(const ProcessSpec& process, double t, std::size_t n,
                                              std::uint64_t seed) {
    return run_batch<std::uint64_t>(n, seed, [&](RngStream& rng) {
        return sample_time_changed_count(process, t, rng);
    });
}

} // namespace gfc
