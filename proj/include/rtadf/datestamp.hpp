#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rtadf/error.hpp"
#include "rtadf/mc.hpp"
#include "rtadf/recursive.hpp"

namespace rtadf {

// One detected bubble. Indices are observation indices into the original
// series; end_index is the first observation back below the critical value
// and is absent while the episode is still running at the sample end.
struct BubbleEpisode {
    int origin_index = 0;
    int peak_index = 0;
    std::optional<int> end_index;
    double peak_stat = 0.0;
    int duration = 0;
};

// PSY convention for screening one-period blips.
inline int default_min_duration(int series_length) {
    return std::max(1, static_cast<int>(std::floor(std::log(static_cast<double>(series_length)))));
}

// Crossing rules: an episode originates at the first index with stat >= cv,
// peaks at the argmax inside the run (ties -> earliest), and terminates at
// the first later index with stat < cv. Runs shorter than min_duration are
// dropped. Missing statistic entries count as below the critical value.
inline std::vector<BubbleEpisode> stamp_episodes(const StatSequence& stats, const CvSequence& cvs,
                                                 int min_duration) {
    if (min_duration < 1) throw config_error("min duration must be >= 1");
    if (stats.end_indices != cvs.end_indices)
        throw input_error("stamp_episodes: statistic and critical-value sequences misaligned");
    const int n = stats.size();

    std::vector<BubbleEpisode> episodes;
    int run_start = -1;
    auto flush = [&](int run_end_exclusive) {
        if (run_start < 0) return;
        const int len = run_end_exclusive - run_start;
        if (len >= min_duration) {
            BubbleEpisode ep;
            ep.origin_index = stats.end_indices[static_cast<std::size_t>(run_start)];
            int peak = run_start;
            for (int i = run_start + 1; i < run_end_exclusive; ++i)
                if (*stats.stats[static_cast<std::size_t>(i)] >
                    *stats.stats[static_cast<std::size_t>(peak)])
                    peak = i;
            ep.peak_index = stats.end_indices[static_cast<std::size_t>(peak)];
            ep.peak_stat = *stats.stats[static_cast<std::size_t>(peak)];
            if (run_end_exclusive < n)
                ep.end_index = stats.end_indices[static_cast<std::size_t>(run_end_exclusive)];
            ep.duration = len;
            episodes.push_back(ep);
        }
        run_start = -1;
    };

    for (int i = 0; i < n; ++i) {
        const auto& stat = stats.stats[static_cast<std::size_t>(i)];
        const bool above = stat && *stat >= cvs.values[static_cast<std::size_t>(i)];
        if (above && run_start < 0) run_start = i;
        if (!above) flush(i);
    }
    flush(n);
    return episodes;
}

// Fraction of the monitored sample covered by episodes; ongoing episodes
// count to the sample end (their duration already does).
inline double episode_coverage(const std::vector<BubbleEpisode>& episodes, int effective_length) {
    if (effective_length <= 0) throw config_error("episode_coverage: effective length must be > 0");
    long total = 0;
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        const auto& ep = episodes[i];
        if (ep.duration < 1) throw input_error("episode_coverage: episode with duration < 1");
        if (i > 0) {
            const auto& prev = episodes[i - 1];
            const int prev_end = prev.end_index ? *prev.end_index : prev.origin_index + prev.duration;
            if (ep.origin_index < prev_end)
                throw input_error("episode_coverage: overlapping episodes");
        }
        total += ep.duration;
    }
    if (total > effective_length) throw input_error("episode_coverage: durations exceed sample");
    return static_cast<double>(total) / static_cast<double>(effective_length);
}

}  // namespace rtadf
