#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtadf/error.hpp"
#include "rtadf/parallel.hpp"
#include "rtadf/recursive.hpp"
#include "rtadf/rng.hpp"
#include "rtadf/series.hpp"

namespace rtadf {

// Unit-root null data generating process
//   y_t = d * T^(-eta) + y_{t-1} + sigma * e_t,  e_t iid standard normal,
// with vanishing drift d = eta = 1 by default.
struct NullSpec {
    double drift_scale = 1.0;    // d
    double drift_exponent = 1.0; // eta
    double innovation_sd = 1.0;  // sigma

    void validate() const {
        if (!(innovation_sd > 0.0)) throw config_error("null spec: innovation sd must be > 0");
        if (drift_exponent < 0.0) throw config_error("null spec: drift exponent must be >= 0");
    }
};

enum class TestKind { adf, radf, sadf, gsadf };

inline const char* test_name(TestKind t) {
    switch (t) {
        case TestKind::adf: return "adf";
        case TestKind::radf: return "radf";
        case TestKind::sadf: return "sadf";
        case TestKind::gsadf: return "gsadf";
    }
    return "?";
}

inline TestKind test_from_name(const std::string& name) {
    if (name == "adf") return TestKind::adf;
    if (name == "radf") return TestKind::radf;
    if (name == "sadf") return TestKind::sadf;
    if (name == "gsadf") return TestKind::gsadf;
    throw config_error("unknown test '" + name + "'");
}

inline constexpr int kQuantileLevels[3] = {90, 95, 99};

// Scalar Monte Carlo critical values for one test.
struct CriticalValues {
    TestKind test = TestKind::gsadf;
    std::map<int, double> quantiles;  // level in percent -> critical value
    int T = 0;
    int replications = 0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

// Per-date BSADF critical values at one level, aligned with a bsadf
// StatSequence for the same T and configuration.
struct CvSequence {
    std::vector<int> end_indices;
    std::vector<double> values;
    int level = 95;  // percent
    int T = 0;
    int replications = 0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

inline TimeSeries simulate_null_path(int T, const NullSpec& spec, Rng& stream) {
    if (T < 2) throw config_error("simulate_null_path: T must be >= 2");
    spec.validate();
    const double drift = spec.drift_scale * std::pow(static_cast<double>(T), -spec.drift_exponent);
    TimeSeries s;
    s.label = "null";
    s.transform = Transform::raw;
    s.dates.resize(static_cast<std::size_t>(T));
    s.values.resize(static_cast<std::size_t>(T));
    double y = spec.innovation_sd * stream.next_normal();
    s.dates[0] = Date{0};
    s.values[0] = y;
    for (int t = 1; t < T; ++t) {
        y += drift + spec.innovation_sd * stream.next_normal();
        s.dates[static_cast<std::size_t>(t)] = Date{t};
        s.values[static_cast<std::size_t>(t)] = y;
    }
    return s;
}

// Empirical quantile, type 7 (linear interpolation of order statistics).
// Input need not be sorted.
inline double quantile_type7(std::vector<double> values, double q) {
    if (values.empty()) throw numeric_error("quantile of empty sample");
    if (q < 0.0 || q > 1.0) throw config_error("quantile level outside [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

// One replication's statistics for the requested tests, all computed from the
// same simulated path. Missing means every window of that path degenerated.
struct NullDraw {
    std::optional<double> adf, radf, sadf, gsadf;
};

namespace detail {

inline NullDraw null_draw(const TimeSeries& path, const TestConfig& cfg, bool want_adf,
                          bool want_radf, bool want_sadf, bool want_gsadf) {
    NullDraw draw;
    if (want_sadf || want_adf) {
        const StatSequence fwd = forward_adf_sequence(path, cfg);
        if (want_adf) draw.adf = fwd.stats.back();
        if (want_sadf) {
            std::optional<double> best;
            for (const auto& v : fwd.stats)
                if (v && (!best || *v > *best)) best = *v;
            draw.sadf = best;
        }
    }
    if (want_gsadf) {
        const StatSequence seq = bsadf_sequence(path, cfg, 1);
        std::optional<double> best;
        for (const auto& v : seq.stats)
            if (v && (!best || *v > *best)) best = *v;
        draw.gsadf = best;
    }
    if (want_radf) {
        if (!cfg.rolling_width) throw config_error("radf critical values need a rolling width");
        try {
            draw.radf = radf(path, cfg).first;
        } catch (const numeric_error&) {
            draw.radf = std::nullopt;
        }
    }
    return draw;
}

inline double tail_quantile(const std::vector<double>& stats, int level, Tail tail) {
    const double q = tail == Tail::right ? static_cast<double>(level) / 100.0
                                         : 1.0 - static_cast<double>(level) / 100.0;
    return quantile_type7(stats, q);
}

}  // namespace detail

// Simulates `replications` independent null paths and returns the per-path
// statistic of `test`. Replication i draws from the stream derived from
// (seed, mc_replication, i) alone, so the result is bit-identical for any
// worker count. Degenerate replications are rare; more than 1% of them is an
// error rather than a silently biased quantile set.
inline std::vector<double> null_distribution(TestKind test, int T, const TestConfig& cfg,
                                             const NullSpec& null_spec, int replications,
                                             std::uint64_t seed, unsigned workers = 0) {
    if (replications < 1) throw config_error("replications must be >= 1");
    if (T < 2) throw config_error("T must be >= 2");
    if (cfg.adf.lags.kind != LagPolicy::Kind::fixed)
        throw config_error("null simulation needs a fixed lag order; resolve BIC on the "
                           "observed series first");
    null_spec.validate();
    (void)resolve_min_window(T, cfg, cfg.adf.lags.value);  // fail fast on bad configs

    std::vector<std::optional<double>> draws(static_cast<std::size_t>(replications));
    parallel_for(static_cast<std::size_t>(replications), workers, [&](std::size_t i) {
        Rng stream = Rng::from_stream(seed, StreamDomain::mc_replication, i);
        const TimeSeries path = simulate_null_path(T, null_spec, stream);
        const NullDraw draw =
            detail::null_draw(path, cfg, test == TestKind::adf, test == TestKind::radf,
                              test == TestKind::sadf, test == TestKind::gsadf);
        switch (test) {
            case TestKind::adf: draws[i] = draw.adf; break;
            case TestKind::radf: draws[i] = draw.radf; break;
            case TestKind::sadf: draws[i] = draw.sadf; break;
            case TestKind::gsadf: draws[i] = draw.gsadf; break;
        }
    });

    std::vector<double> stats;
    stats.reserve(draws.size());
    for (const auto& d : draws)
        if (d) stats.push_back(*d);
    const std::size_t missing = draws.size() - stats.size();
    if (static_cast<double>(missing) > 0.01 * static_cast<double>(draws.size()))
        throw numeric_error("null simulation: " + std::to_string(missing) + " of " +
                            std::to_string(draws.size()) + " replications degenerate");
    return stats;
}

inline CriticalValues critical_values(TestKind test, int T, const TestConfig& cfg,
                                      const NullSpec& null_spec, int replications,
                                      std::uint64_t seed, unsigned workers = 0,
                                      const std::string& config_digest = "") {
    const std::vector<double> stats =
        null_distribution(test, T, cfg, null_spec, replications, seed, workers);
    CriticalValues cv;
    cv.test = test;
    cv.T = T;
    cv.replications = replications;
    cv.seed = seed;
    cv.config_digest = config_digest;
    for (int level : kQuantileLevels)
        cv.quantiles[level] = detail::tail_quantile(stats, level, cfg.adf.tail);
    return cv;
}

// Per-date BSADF quantiles across replications, on the same replication
// streams as the scalar run: with equal (seed, replications, T, config) the
// scalar GSADF distribution is the per-path maximum of these sequences.
inline CvSequence bsadf_cv_sequence(int level, int T, const TestConfig& cfg,
                                    const NullSpec& null_spec, int replications,
                                    std::uint64_t seed, unsigned workers = 0,
                                    const std::string& config_digest = "") {
    if (level != 90 && level != 95 && level != 99)
        throw config_error("cv level must be one of 90, 95, 99");
    if (replications < 1) throw config_error("replications must be >= 1");
    if (cfg.adf.lags.kind != LagPolicy::Kind::fixed)
        throw config_error("cv sequences need a fixed lag order; resolve BIC on the "
                           "observed series first");
    null_spec.validate();

    const int w0 = resolve_min_window(T, cfg, cfg.adf.lags.value);
    const int count = T - w0 + 1;

    std::vector<double> matrix(static_cast<std::size_t>(replications) *
                                   static_cast<std::size_t>(count),
                               std::numeric_limits<double>::quiet_NaN());
    parallel_for(static_cast<std::size_t>(replications), workers, [&](std::size_t i) {
        Rng stream = Rng::from_stream(seed, StreamDomain::mc_replication, i);
        const TimeSeries path = simulate_null_path(T, null_spec, stream);
        const StatSequence seq = bsadf_sequence(path, cfg, 1);
        double* row = matrix.data() + i * static_cast<std::size_t>(count);
        for (int j = 0; j < count; ++j)
            if (seq.stats[static_cast<std::size_t>(j)])
                row[j] = *seq.stats[static_cast<std::size_t>(j)];
    });

    CvSequence cv;
    cv.level = level;
    cv.T = T;
    cv.replications = replications;
    cv.seed = seed;
    cv.config_digest = config_digest;
    cv.end_indices.resize(static_cast<std::size_t>(count));
    cv.values.resize(static_cast<std::size_t>(count));
    std::vector<double> column;
    column.reserve(static_cast<std::size_t>(replications));
    for (int j = 0; j < count; ++j) {
        column.clear();
        for (int i = 0; i < replications; ++i) {
            const double v = matrix[static_cast<std::size_t>(i) * static_cast<std::size_t>(count) +
                                    static_cast<std::size_t>(j)];
            if (!std::isnan(v)) column.push_back(v);
        }
        const std::size_t missing = static_cast<std::size_t>(replications) - column.size();
        if (static_cast<double>(missing) > 0.01 * static_cast<double>(replications))
            throw numeric_error("cv sequence: too many degenerate replications at index " +
                                std::to_string(j));
        cv.end_indices[static_cast<std::size_t>(j)] = w0 - 1 + j;
        cv.values[static_cast<std::size_t>(j)] = detail::tail_quantile(column, level, cfg.adf.tail);
    }
    return cv;
}

// Monte Carlo p-value: fraction of null draws at least as extreme as the
// observed statistic, in the direction of the configured tail.
inline double mc_p_value(double observed, const std::vector<double>& null_stats, Tail tail) {
    if (null_stats.empty()) throw numeric_error("p-value from empty null distribution");
    std::size_t count = 0;
    for (double v : null_stats)
        if (tail == Tail::right ? v >= observed : v <= observed) ++count;
    return static_cast<double>(count) / static_cast<double>(null_stats.size());
}

}  // namespace rtadf
