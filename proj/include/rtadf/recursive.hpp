#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtadf/adf.hpp"
#include "rtadf/error.hpp"
#include "rtadf/parallel.hpp"
#include "rtadf/series.hpp"
#include "rtadf/window.hpp"

namespace rtadf {

enum class WindowRule { psy_default, fixed };

struct TestConfig {
    AdfSpec adf;
    WindowRule min_window_rule = WindowRule::psy_default;
    int min_window = 0;               // used when min_window_rule == fixed
    std::optional<int> rolling_width;  // RADF only
};

enum class SeqKind { forward_adf, rolling_adf, bsadf };

// Per-date recursive statistics, aligned to observation indices via
// end_indices. Degenerate windows are recorded as missing, never as numbers.
struct StatSequence {
    SeqKind kind = SeqKind::forward_adf;
    std::vector<int> end_indices;
    std::vector<std::optional<double>> stats;

    int size() const { return static_cast<int>(stats.size()); }
};

// Smallest admissible window: floor(T * (0.01 + 1.8/sqrt(T))) under the
// psy_default rule, clamped from below so the window stays estimable.
inline int resolve_min_window(int series_length, const TestConfig& cfg, int lags) {
    const int clamp = min_estimable_length(cfg.adf, lags);
    if (cfg.min_window_rule == WindowRule::fixed) {
        if (cfg.min_window < clamp)
            throw config_error("min window " + std::to_string(cfg.min_window) +
                               " below the smallest estimable window " + std::to_string(clamp) +
                               " for k=" + std::to_string(lags));
        return cfg.min_window;
    }
    const double t = static_cast<double>(series_length);
    const int psy = static_cast<int>(std::floor(t * (0.01 + 1.8 / std::sqrt(t))));
    return std::max(psy, clamp);
}

inline int resolve_lags(const TimeSeries& s, const TestConfig& cfg) {
    return resolve_lags(std::span<const double>(s.values), cfg.adf);
}

namespace detail {

inline void require_length(const TimeSeries& s, int needed, const char* what) {
    if (s.size() < needed)
        throw config_error(std::string(what) + ": series of length " + std::to_string(s.size()) +
                           " shorter than minimum window " + std::to_string(needed));
}

inline double sup_of(const StatSequence& seq, const char* what) {
    std::optional<double> best;
    for (const auto& v : seq.stats)
        if (v && (!best || *v > *best)) best = *v;
    if (!best) throw numeric_error(std::string(what) + ": every window degenerate");
    return *best;
}

}  // namespace detail

// Every window of every recursive test accumulates its regression rows in
// strictly descending row order (window end first). Windows shared between
// tests then produce bitwise-identical cross-moments and statistics, which
// makes the ordering laws adf <= sadf <= gsadf and radf <= gsadf hold
// exactly, not merely up to rounding: each supremum ranges over a superset
// of identical values.
namespace detail {

inline std::optional<double> window_stat_descending(AdfWindowEngine& engine, int start, int end,
                                                    int lags) {
    engine.reset();
    for (int t = end; t >= start + lags + 1; --t) engine.add_obs(t);
    return engine.stat();
}

}  // namespace detail

// Forward ADF sequence anchored at the first observation: entry t is the ADF
// statistic over window [0, t] for t = w0-1 .. T-1.
inline StatSequence forward_adf_sequence(const TimeSeries& s, const TestConfig& cfg) {
    const int lags = resolve_lags(s, cfg);
    const int w0 = resolve_min_window(s.size(), cfg, lags);
    detail::require_length(s, w0, "sadf");
    const int T = s.size();

    StatSequence seq;
    seq.kind = SeqKind::forward_adf;
    seq.end_indices.reserve(static_cast<std::size_t>(T - w0 + 1));
    seq.stats.reserve(static_cast<std::size_t>(T - w0 + 1));

    const AdfSeriesContext ctx(s.values, lags, cfg.adf.deterministic);
    AdfWindowEngine engine(ctx);
    for (int end = w0 - 1; end < T; ++end) {
        seq.end_indices.push_back(end);
        seq.stats.push_back(detail::window_stat_descending(engine, 0, end, lags));
    }
    return seq;
}

// Full-sample right-tail ADF statistic.
inline double adf_full(const TimeSeries& s, const TestConfig& cfg) {
    const int lags = resolve_lags(s, cfg);
    const int w0 = resolve_min_window(s.size(), cfg, lags);
    detail::require_length(s, w0, "adf");
    const AdfSeriesContext ctx(s.values, lags, cfg.adf.deterministic);
    AdfWindowEngine engine(ctx);
    const auto stat = detail::window_stat_descending(engine, 0, s.size() - 1, lags);
    if (!stat) throw numeric_error("degenerate window");
    return *stat;
}

// SADF: supremum of the forward-expanding sequence (Phillips-Wu-Yu).
inline std::pair<double, StatSequence> sadf(const TimeSeries& s, const TestConfig& cfg) {
    StatSequence seq = forward_adf_sequence(s, cfg);
    const double sup = detail::sup_of(seq, "sadf");
    return {sup, std::move(seq)};
}

// RADF: supremum of ADF statistics over fixed-width rolling windows.
inline std::pair<double, StatSequence> radf(const TimeSeries& s, const TestConfig& cfg) {
    if (!cfg.rolling_width)
        throw config_error("radf: rolling width not set");
    const int width = *cfg.rolling_width;
    const int lags = resolve_lags(s, cfg);
    const int clamp = min_estimable_length(cfg.adf, lags);
    if (width < clamp)
        throw config_error("radf: rolling width " + std::to_string(width) +
                           " below the smallest estimable window " + std::to_string(clamp));
    detail::require_length(s, width, "radf");
    const int T = s.size();

    StatSequence seq;
    seq.kind = SeqKind::rolling_adf;
    seq.end_indices.reserve(static_cast<std::size_t>(T - width + 1));
    seq.stats.reserve(static_cast<std::size_t>(T - width + 1));

    const AdfSeriesContext ctx(s.values, lags, cfg.adf.deterministic);
    AdfWindowEngine engine(ctx);
    for (int end = width - 1; end < T; ++end) {
        seq.end_indices.push_back(end);
        seq.stats.push_back(detail::window_stat_descending(engine, end - width + 1, end, lags));
    }
    const double sup = detail::sup_of(seq, "radf");
    return {sup, std::move(seq)};
}

// BSADF sequence: for each end t, the supremum of ADF statistics over all
// admissible start points (backward-expanding windows). Ends are independent
// and run in parallel; each slot is written by exactly one task, so results
// do not depend on the worker count.
inline StatSequence bsadf_sequence(const TimeSeries& s, const TestConfig& cfg,
                                   unsigned workers = 1) {
    const int lags = resolve_lags(s, cfg);
    const int w0 = resolve_min_window(s.size(), cfg, lags);
    detail::require_length(s, w0, "bsadf");
    const int T = s.size();
    const int count = T - w0 + 1;

    StatSequence seq;
    seq.kind = SeqKind::bsadf;
    seq.end_indices.resize(static_cast<std::size_t>(count));
    seq.stats.resize(static_cast<std::size_t>(count));

    const AdfSeriesContext ctx(s.values, lags, cfg.adf.deterministic);
    parallel_for(
        static_cast<std::size_t>(count), workers,
        [&](std::size_t slot) {
            const int end = w0 - 1 + static_cast<int>(slot);
            AdfWindowEngine engine(ctx);
            std::optional<double> best;
            // Shortest window first, then extend the start backward one
            // observation at a time; each extension adds a single row, and
            // rows enter in descending order throughout.
            int start = end - w0 + 1;
            for (int t = end; t >= start + lags + 1; --t) engine.add_obs(t);
            for (;;) {
                const std::optional<double> v = engine.stat();
                if (v && (!best || *v > *best)) best = *v;
                if (start == 0) break;
                --start;
                engine.add_obs(start + lags + 1);
            }
            seq.end_indices[slot] = end;
            seq.stats[slot] = best;
        },
        /*chunk=*/8);
    return seq;
}

// GSADF delegates to the BSADF recursion so the scalar test and the
// date-stamping sequence can never disagree.
inline double gsadf(const TimeSeries& s, const TestConfig& cfg, unsigned workers = 1) {
    const StatSequence seq = bsadf_sequence(s, cfg, workers);
    return detail::sup_of(seq, "gsadf");
}

}  // namespace rtadf
