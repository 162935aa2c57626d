#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "gfc/bernstein.hpp"
#include "gfc/gfcalc.hpp"
#include "gfc/invlap.hpp"

namespace gfc {

// ---------------------------------------------------------------------------
// process description
// ---------------------------------------------------------------------------

struct PoissonLaw {
    double rate;
};

// counting process with jumps of size j = 1..k at rates[j-1]
struct GcpLaw {
    std::vector<double> rates;
};

using OuterLaw = std::variant<PoissonLaw, GcpLaw>;

// Outer count law, optionally run on the operational clock of a subordinator
// (inner exponent psi), optionally run on an inverse-subordinator clock
// (inverse exponent f). Multi-subordinator compositions enter as a sum
// exponent in `inner`.
struct ProcessSpec {
    OuterLaw outer;
    std::optional<BernsteinSpec> inner;
    std::optional<BernsteinSpec> inverse;

    static ProcessSpec poisson(double rate);
    static ProcessSpec gcp(std::vector<double> rates);
    ProcessSpec with_inner(BernsteinSpec psi) &&;
    ProcessSpec with_inverse(BernsteinSpec f) &&;

    double total_rate() const; // lambda, or Lambda = sum of GCP rates
    std::size_t jump_kinds() const;

    nlohmann::json to_json() const;
    static ProcessSpec from_json(const nlohmann::json& j);
};

// ---------------------------------------------------------------------------
// jump-configuration combinatorics
// ---------------------------------------------------------------------------

// one solution of sum_j j x_j = n
struct OmegaTuple {
    std::vector<std::uint32_t> x;
    std::uint32_t z; // sum of x_j
};

// All nonnegative (x_1..x_k) with sum_j j x_j = n, in lexicographic order.
std::vector<OmegaTuple> omega_set(std::uint32_t k, std::uint32_t n);

// ---------------------------------------------------------------------------
// base pmfs (log-space arithmetic)
// ---------------------------------------------------------------------------

double poisson_pmf(double lambda, double t, std::uint64_t k);
double gcp_pmf(const std::vector<double>& rates, double t, std::uint64_t n);

// ---------------------------------------------------------------------------
// pmf generator (lower-triangular Toeplitz)
// ---------------------------------------------------------------------------

// The operator acting on the pmf vector: entry (n, n) = diag < 0 and entry
// (n, n-q) = offsets[q-1] >= 0. Row n of p'(t) = G p(t) reads
//   diag p_n + sum_q offsets[q-1] p_{n-q}.
struct GeneratorMatrix {
    double diag = 0.0;
    std::vector<double> offsets;

    std::size_t nmax() const { return offsets.size(); }
    // row `n` applied to a pmf vector
    double apply_row(const std::vector<double>& p, std::size_t n) const;
};

// Generator of the pmf of the outer law on the operational clock of psi
// (psi absent = the identity clock). Poisson outer: offset q is
// |psi^(q)(lambda)| lambda^q / q!. GCP outer: the finite nilpotent Taylor
// expansion of psi applied to the jump operator, whose offset-q entry is the
// jump-configuration sum over omega_set(k, q).
GeneratorMatrix build_generator(const OuterLaw& outer, const std::optional<BernsteinSpec>& psi,
                                std::size_t nmax);

// single offset-q coefficient of the GCP generator (the omega-sum form);
// build_generator assembles exactly these values
double gcp_generator_coefficient(const std::vector<double>& rates, const BernsteinSpec& psi,
                                 std::uint32_t q);

// ---------------------------------------------------------------------------
// pmf tables
// ---------------------------------------------------------------------------

enum class PmfMethod { resolvent, monte_carlo, stable_closed_form };

struct PmfOptions {
    PmfMethod method = PmfMethod::resolvent;
    int inversion_order = invlap::kDefaultOrder;
    std::size_t mc_draws = 100000;
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    bool adaptive = true;           // grow nmax until the deficit target is met
    double deficit_target = 1e-8;
    std::size_t guard_rows = 32;
    std::size_t nmax_cap = 512;
};

struct PmfTable {
    double t = 0.0;
    std::vector<double> probs;      // p_0..p_nmax, clamped at 0
    double mass_deficit = 0.0;      // 1 - sum(probs)
    std::string method;
    bool capped = false;            // adaptive growth stopped at nmax_cap
    std::vector<double> stderrs;    // per-bin standard errors (Monte Carlo only)

    std::size_t nmax() const { return probs.empty() ? 0 : probs.size() - 1; }
    nlohmann::json metadata(const ProcessSpec& process) const;
};

// pmf of the outer law on the psi clock (no inverse clock); exact finite
// nilpotent expansion of exp(t G)
PmfTable pmf_no_inverse(const ProcessSpec& process, double t, std::size_t nmax,
                        const PmfOptions& options = {});

// pmf of the fully time-changed process. Resolvent: per inversion node r the
// vector f(r)/r (f(r) I - G)^{-1} e_0 by triangular solve, nodes combined by
// the inversion weights. StableClosedForm: termwise derivative extraction on
// the Mittag-Leffler series (Poisson outer, no psi, stable f). MonteCarlo:
// histogram of simulated composed counts.
PmfTable pmf_time_changed(const ProcessSpec& process, double t, std::size_t nmax,
                          const PmfOptions& options = {});

// probability generating function E u^{X(t)} for any process shape
double pgf(const ProcessSpec& process, double u, double t);

// Closed-form pmf of the generalized counting process on a compound
// Poisson-Gamma clock (jump rates `rates`, clock parameters lambda, alpha,
// beta): Wright-function form, dispatching to the three-parameter
// Mittag-Leffler form at alpha = 1.
double gn_pmf_closed(const std::vector<double>& rates, double lambda, double alpha, double beta,
                     double t, std::uint64_t n);

// ---------------------------------------------------------------------------
// governing-equation verification
// ---------------------------------------------------------------------------

struct GoverningOptions {
    double min_t = 0.05;
    double tolerance = 5e-3;
    int inversion_order = invlap::kDefaultOrder;
    std::size_t guard_rows = 32;
};

// Residual of row n of the governing equation on the grid i*step,
// i = 0..npoints: the convolution-type derivative of p_n (kernel of the
// inverse exponent; ordinary derivative when absent) minus generator row n
// applied to the pmf vector.
ResidualReport governing_residual(const ProcessSpec& process, double step, std::size_t npoints,
                                  std::uint64_t n, const GoverningOptions& options = {});

} // namespace gfc
