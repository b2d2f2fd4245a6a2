#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rtadf/error.hpp"
#include "rtadf/mc.hpp"
#include "rtadf/rng.hpp"
#include "rtadf/series.hpp"

namespace rtadf {

// Evans-style periodically collapsing bubble. Below b_threshold the bubble
// compounds at rate (1+r); above it, it grows at (1+r)/pi per period while
// surviving and collapses to the delta floor with probability 1 - pi.
struct EvansSpec {
    double r = 0.05;
    double b_threshold = 1.0;
    double delta = 0.5;
    double pi = 0.85;
    double tau = 0.05;
    double b0 = 0.5;
    int T = 0;

    void validate() const {
        if (!(r > 0.0)) throw config_error("evans: r must be > 0");
        if (!(b_threshold > 0.0)) throw config_error("evans: b_threshold must be > 0");
        if (!(delta > 0.0) || !(delta < b_threshold))
            throw config_error("evans: delta must lie in (0, b_threshold)");
        if (!(pi > 0.0) || pi > 1.0) throw config_error("evans: pi must lie in (0, 1]");
        if (tau < 0.0) throw config_error("evans: tau must be >= 0");
        if (!(b0 > 0.0)) throw config_error("evans: B0 must be > 0");
        if (T < 2) throw config_error("evans: T must be >= 2");
    }
};

struct EvansSample {
    TimeSeries series;
    std::vector<char> regime_mask;     // 1 where B_t > b_threshold
    std::vector<int> collapse_indices; // t where a theta=0 draw hit in regime
};

inline TimeSeries gen_random_walk(int T, const NullSpec& null_spec, std::uint64_t seed) {
    Rng stream = Rng::from_stream(seed, StreamDomain::generator, 0);
    TimeSeries s = simulate_null_path(T, null_spec, stream);
    s.label = "rw(seed=" + std::to_string(seed) + ")";
    return s;
}

// Driftless random walk that switches to an explosive AR(1) with the same
// innovation scale at regime_start. start_level offsets the initial value so
// noiseless regimes can launch from a nonzero state.
inline TimeSeries gen_explosive_ar1(int T, double rho, double sigma, int regime_start,
                                    std::uint64_t seed, double start_level = 0.0) {
    if (T < 2) throw config_error("ar1: T must be >= 2");
    if (!(rho > 1.0)) throw config_error("ar1: rho must be > 1");
    if (sigma < 0.0) throw config_error("ar1: sigma must be >= 0");
    if (regime_start < 0 || regime_start >= T)
        throw config_error("ar1: regime start outside [0, T)");

    Rng stream = Rng::from_stream(seed, StreamDomain::generator, 0);
    TimeSeries s;
    s.label = "ar1(rho=" + std::to_string(rho) + ",regime_start=" +
              std::to_string(regime_start) + ",seed=" + std::to_string(seed) + ")";
    s.transform = Transform::raw;
    s.dates.resize(static_cast<std::size_t>(T));
    s.values.resize(static_cast<std::size_t>(T));
    double y = start_level + sigma * stream.next_normal();
    s.dates[0] = Date{0};
    s.values[0] = y;
    for (int t = 1; t < T; ++t) {
        const double shock = sigma * stream.next_normal();
        y = (t >= regime_start ? rho * y : y) + shock;
        s.dates[static_cast<std::size_t>(t)] = Date{t};
        s.values[static_cast<std::size_t>(t)] = y;
    }
    return s;
}

// Draw order is fixed per time step: the lognormal shock's normal first,
// then the survival Bernoulli (drawn every step, used only in regime).
inline EvansSample gen_evans_bubble(const EvansSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng stream = Rng::from_stream(seed, StreamDomain::generator, 0);

    EvansSample out;
    out.series.label = "evans(seed=" + std::to_string(seed) + ")";
    out.series.transform = Transform::raw;
    out.series.dates.resize(static_cast<std::size_t>(spec.T));
    out.series.values.resize(static_cast<std::size_t>(spec.T));
    out.regime_mask.resize(static_cast<std::size_t>(spec.T));

    const double tau2_half = spec.tau * spec.tau / 2.0;
    double b = spec.b0;
    out.series.dates[0] = Date{0};
    out.series.values[0] = b;
    out.regime_mask[0] = b > spec.b_threshold ? 1 : 0;
    for (int t = 1; t < spec.T; ++t) {
        const double u = std::exp(spec.tau * stream.next_normal() - tau2_half);
        const bool survive = stream.next_bernoulli(spec.pi);
        if (b <= spec.b_threshold) {
            b = (1.0 + spec.r) * b * u;
        } else if (survive) {
            b = (spec.delta + (1.0 + spec.r) / spec.pi * (b - spec.delta / (1.0 + spec.r))) * u;
        } else {
            b = spec.delta * u;
            out.collapse_indices.push_back(t);
        }
        out.series.dates[static_cast<std::size_t>(t)] = Date{t};
        out.series.values[static_cast<std::size_t>(t)] = b;
        out.regime_mask[static_cast<std::size_t>(t)] = b > spec.b_threshold ? 1 : 0;
    }
    return out;
}

}  // namespace rtadf
