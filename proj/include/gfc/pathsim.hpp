#pragma once

#include <cstdint>
#include <vector>

#include "gfc/bernstein.hpp"
#include "gfc/counting.hpp"
#include "gfc/rng.hpp"

namespace gfc {

// one subordinator trajectory on a uniform grid
struct PathSample {
    std::vector<double> times;
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    BernsteinSpec exponent;
};

// one exact increment of the subordinator over a window of length dt
double draw_increment(const BernsteinSpec& spec, double dt, RngStream& rng);

// i.i.d.-increment path on the grid 0, step, 2 step, ... covering [0, horizon]
PathSample sample_subordinator_path(const BernsteinSpec& spec, double horizon, double step,
                                    RngStream& rng);

// default bracket width for first-passage refinement
double default_refine_eps(double t);

struct PassageDetail {
    double y;        // passage location
    double h_below;  // path level witness at y - refine_eps (<= t)
    double h_above;  // path level witness at y + refine_eps (> t)
};

// One draw of the inverse subordinator Y(t) = inf{s : H(s) > t}. Finite-
// activity exponents (drift + compound Poisson) are crossed exactly event by
// event; exponents with a stable part re-simulate the path at doubled
// resolution until the crossing cell is narrower than refine_eps.
double sample_inverse_passage(const BernsteinSpec& spec, double t, RngStream& rng,
                              double refine_eps);
PassageDetail sample_inverse_passage_detail(const BernsteinSpec& spec, double t, RngStream& rng,
                                            double refine_eps);

// n passage draws over chunked streams derived from `seed`; deterministic
// for any thread count
std::vector<double> sample_inverse_passage_batch(const BernsteinSpec& spec, double t,
                                                 std::size_t n, std::uint64_t seed,
                                                 double refine_eps);

// one draw of the composed count at time t
std::uint64_t sample_time_changed_count(const ProcessSpec& process, double t, RngStream& rng);

// n composed-count draws over chunked streams derived from `seed`
std::vector<std::uint64_t> sample_count_batch(const ProcessSpec& process, double t, std::size_t n,
                                              std::uint64_t seed);

} // namespace gfc
