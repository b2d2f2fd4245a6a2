// rtadf: right-tail ADF bubble detection on price series.
//
// Subcommands: test (run the ADF/RADF/SADF/GSADF battery with simulated
// critical values and Monte Carlo p-values), datestamp (BSADF date-stamping
// of bubble episodes), cv (critical-value cache files), simulate (synthetic
// series generators for size/power studies).
//
// Exit codes: 0 success, 2 input error, 3 configuration error, 4 internal
// numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtadf/rtadf.hpp"

namespace {

using nlohmann::json;
using namespace rtadf;

struct CommonOpts {
    std::string input;
    std::string date_col = "date";
    std::string value_col = "value";
    std::string date_format = kIsoDateFormat;
    bool use_log = true;
    int lags = 0;
    int lag_bic_max = -1;  // -1: fixed lags
    int min_window = 0;    // 0: psy default rule
    int rolling_width = 0; // 0: unset
    std::string tail = "right";
    bool trend = false;
    unsigned threads = 0;
    int replications = 10000;
    std::uint64_t seed = 0;
};

void add_series_options(CLI::App* cmd, CommonOpts& opt) {
    cmd->add_option("--input", opt.input, "input CSV path")->required();
    cmd->add_option("--date-col", opt.date_col, "date column name (default: date)");
    cmd->add_option("--value-col", opt.value_col, "value column name (default: value)");
    cmd->add_option("--date-format", opt.date_format,
                    "date pattern, letters Y/M/D (default: YYYY-MM-DD)");
    cmd->add_flag("--log,!--no-log", opt.use_log,
                  "analyze log prices (default) or raw levels (--no-log)");
}

void add_test_options(CLI::App* cmd, CommonOpts& opt) {
    cmd->add_option("--lags", opt.lags, "fixed lagged-difference order k (default: 0)");
    cmd->add_option("--lag-bic-max", opt.lag_bic_max,
                    "select k in [0, k_max] by BIC on the full sample");
    cmd->add_option("--min-window", opt.min_window,
                    "minimum window in observations (default: floor(T(0.01+1.8/sqrt(T))))");
    cmd->add_option("--tail", opt.tail, "rejection tail: right (default) or left")
        ->check(CLI::IsMember({"right", "left"}));
    cmd->add_flag("--trend", opt.trend, "include a linear trend in the ADF regression");
    cmd->add_option("--threads", opt.threads, "worker threads (default: all cores)");
}

TimeSeries load_series(const CommonOpts& opt) {
    TimeSeries s = load_csv(opt.input, opt.date_col, opt.value_col, opt.date_format);
    if (opt.use_log) s = to_log(s);
    return s;
}

TestConfig build_config(const CommonOpts& opt) {
    TestConfig cfg;
    cfg.adf.deterministic = opt.trend ? Deterministic::constant_and_trend : Deterministic::constant;
    cfg.adf.tail = opt.tail == "left" ? Tail::left : Tail::right;
    if (opt.lag_bic_max >= 0)
        cfg.adf.lags = LagPolicy::bic(opt.lag_bic_max);
    else
        cfg.adf.lags = LagPolicy::fixed(opt.lags);
    if (opt.min_window > 0) {
        cfg.min_window_rule = WindowRule::fixed;
        cfg.min_window = opt.min_window;
    }
    if (opt.rolling_width > 0) cfg.rolling_width = opt.rolling_width;
    return cfg;
}

// BIC lag selection happens once, on the observed series; every window and
// every null replication then runs at that fixed order.
TestConfig resolve_config(const TestConfig& cfg, const TimeSeries& s) {
    TestConfig resolved = cfg;
    resolved.adf.lags = LagPolicy::fixed(resolve_lags(s, cfg));
    return resolved;
}

json manifest_json(const std::string& command, const CommonOpts& opt, const TestConfig& cfg,
                   const NullSpec& null_spec, const TimeSeries& s, int resolved_w0) {
    json m;
    m["tool"] = "rtadf";
    m["version"] = kVersion;
    m["command"] = command;
    m["input"] = {{"path", opt.input},
                  {"digest", hash_file_bytes(opt.input)},
                  {"date_column", opt.date_col},
                  {"value_column", opt.value_col},
                  {"date_format", opt.date_format},
                  {"log", opt.use_log}};
    m["config"] = config_to_json(cfg, null_spec);
    m["config_digest"] = config_digest(cfg, null_spec);
    m["resolved"] = {{"T", s.size()},
                     {"lags", cfg.adf.lags.value},
                     {"min_window", resolved_w0}};
    m["seed"] = opt.seed;
    m["replications"] = opt.replications;
    return m;
}

void warn_replications(int replications, int floor_value) {
    if (replications < floor_value)
        throw config_error("replications must be >= " + std::to_string(floor_value));
    if (replications < 1000)
        std::cerr << "warning: " << replications
                  << " replications is low for quoted quantiles; 10000 is the usual choice\n";
}

std::vector<int> parse_levels(const std::string& text) {
    std::vector<int> levels;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int level = 0;
        try {
            level = std::stoi(item);
        } catch (const std::exception&) {
            throw config_error("bad level '" + item + "'");
        }
        if (level != 90 && level != 95 && level != 99)
            throw config_error("levels must be drawn from {90, 95, 99}");
        levels.push_back(level);
    }
    if (levels.empty()) throw config_error("no levels given");
    std::sort(levels.begin(), levels.end());
    return levels;
}

// ---------------------------------------------------------------- test ----

int cmd_test(const CommonOpts& opt, const std::string& which, const std::string& levels_text,
             const std::string& out_path) {
    const std::vector<int> levels = parse_levels(levels_text);
    warn_replications(opt.replications, 100);

    const TimeSeries s = load_series(opt);
    const TestConfig cfg = resolve_config(build_config(opt), s);
    const NullSpec null_spec;
    const int w0 = resolve_min_window(s.size(), cfg, cfg.adf.lags.value);

    std::vector<TestKind> selected;
    if (which == "all")
        selected = {TestKind::adf, TestKind::radf, TestKind::sadf, TestKind::gsadf};
    else
        selected = {test_from_name(which)};
    const bool radf_selected =
        std::find(selected.begin(), selected.end(), TestKind::radf) != selected.end();
    if (radf_selected && !cfg.rolling_width) {
        if (which == "all") {
            // The battery shrinks to the three window-free tests.
            selected = {TestKind::adf, TestKind::sadf, TestKind::gsadf};
            std::cerr << "note: no --rolling-width given, skipping radf\n";
        } else {
            throw config_error("radf needs --rolling-width");
        }
    }
    // A rolling window narrower than the recursive minimum window would break
    // the radf <= gsadf ordering within one battery run.
    if (selected.size() > 1 && cfg.rolling_width && *cfg.rolling_width < w0)
        throw config_error("--rolling-width " + std::to_string(*cfg.rolling_width) +
                           " is below the minimum window " + std::to_string(w0) +
                           "; raise it or run --test radf alone");

    json results;
    std::printf("%-6s %12s", "test", "statistic");
    for (int level : levels) std::printf(" %9s", ("cv" + std::to_string(level)).c_str());
    std::printf(" %9s\n", "p-value");
    for (TestKind test : selected) {
        double stat = 0.0;
        switch (test) {
            case TestKind::adf: stat = adf_full(s, cfg); break;
            case TestKind::radf: stat = radf(s, cfg).first; break;
            case TestKind::sadf: stat = sadf(s, cfg).first; break;
            case TestKind::gsadf: stat = gsadf(s, cfg, opt.threads); break;
        }
        const std::vector<double> nulls = null_distribution(
            test, s.size(), cfg, null_spec, opt.replications, opt.seed, opt.threads);
        const double p = mc_p_value(stat, nulls, cfg.adf.tail);

        json entry;
        entry["statistic"] = stat;
        json cvs;
        std::printf("%-6s %12.4f", test_name(test), stat);
        for (int level : levels) {
            const double q = cfg.adf.tail == Tail::right
                                 ? quantile_type7(nulls, level / 100.0)
                                 : quantile_type7(nulls, 1.0 - level / 100.0);
            cvs[std::to_string(level)] = q;
            std::printf(" %9.4f", q);
        }
        std::printf(" %9.4f\n", p);
        entry["critical_values"] = cvs;
        entry["p_value"] = p;
        entry["replications_used"] = static_cast<int>(nulls.size());
        results[test_name(test)] = entry;
    }

    if (!out_path.empty()) {
        json report;
        report["manifest"] = manifest_json("test", opt, cfg, null_spec, s, w0);
        report["manifest"]["levels"] = levels;
        report["manifest"]["tests"] = [&] {
            json arr = json::array();
            for (TestKind t : selected) arr.push_back(test_name(t));
            return arr;
        }();
        report["results"] = results;
        write_text_atomic(out_path, report.dump(2) + "\n");
        std::cerr << "report written to " << out_path << "\n";
    }
    return 0;
}

// ----------------------------------------------------------- datestamp ----

json episode_to_json(const BubbleEpisode& ep, const TimeSeries& s) {
    json e;
    e["origin_index"] = ep.origin_index;
    e["origin_date"] = format_date(s.dates[static_cast<std::size_t>(ep.origin_index)]);
    e["peak_index"] = ep.peak_index;
    e["peak_date"] = format_date(s.dates[static_cast<std::size_t>(ep.peak_index)]);
    if (ep.end_index) {
        e["end_index"] = *ep.end_index;
        e["end_date"] = format_date(s.dates[static_cast<std::size_t>(*ep.end_index)]);
    } else {
        e["end_index"] = nullptr;
        e["end_date"] = nullptr;
    }
    e["peak_stat"] = ep.peak_stat;
    e["duration"] = ep.duration;
    e["ongoing"] = !ep.end_index.has_value();
    return e;
}

int cmd_datestamp(const CommonOpts& opt, int level, int min_duration,
                  const std::string& cv_cache, const std::string& out_prefix) {
    if (level != 90 && level != 95 && level != 99)
        throw config_error("--level must be one of 90, 95, 99");
    warn_replications(opt.replications, 100);

    const TimeSeries s = load_series(opt);
    const TestConfig cfg = resolve_config(build_config(opt), s);
    const NullSpec null_spec;
    const int w0 = resolve_min_window(s.size(), cfg, cfg.adf.lags.value);
    const std::string digest = config_digest(cfg, null_spec);

    const StatSequence stats = bsadf_sequence(s, cfg, opt.threads);

    CvSequence cv;
    bool from_cache = false;
    if (!cv_cache.empty() && std::filesystem::exists(cv_cache)) {
        cv = cv_sequence_from_json(load_json_file(cv_cache));
        from_cache = true;
        if (cv.config_digest != digest)
            throw config_error("cv cache '" + cv_cache + "' was built for a different config:\n" +
                               "  cache digest:   " + cv.config_digest + "\n" +
                               "  current digest: " + digest + "\n" +
                               "  current config: " + canonical_config(cfg, null_spec));
        if (cv.T != s.size() || cv.level != level || cv.end_indices != stats.end_indices)
            throw config_error("cv cache '" + cv_cache + "' does not align with this series (T=" +
                               std::to_string(cv.T) + " level=" + std::to_string(cv.level) + ")");
    } else {
        cv = bsadf_cv_sequence(level, s.size(), cfg, null_spec, opt.replications, opt.seed,
                               opt.threads, digest);
        if (!cv_cache.empty()) {
            write_text_atomic(cv_cache, cv_sequence_to_json(cv, cfg, null_spec).dump(2) + "\n");
            std::cerr << "cv cache written to " << cv_cache << "\n";
        }
    }

    const int min_dur = min_duration > 0 ? min_duration : default_min_duration(s.size());
    const auto episodes = stamp_episodes(stats, cv, min_dur);
    const double coverage = episode_coverage(episodes, stats.size());

    // Human summary.
    std::printf("%-3s %-12s %-12s %-12s %10s %9s\n", "#", "origin", "peak", "end", "peak_stat",
                "duration");
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        const auto& ep = episodes[i];
        std::printf("%-3zu %-12s %-12s %-12s %10.4f %9d\n", i + 1,
                    format_date(s.dates[static_cast<std::size_t>(ep.origin_index)]).c_str(),
                    format_date(s.dates[static_cast<std::size_t>(ep.peak_index)]).c_str(),
                    ep.end_index
                        ? format_date(s.dates[static_cast<std::size_t>(*ep.end_index)]).c_str()
                        : "(ongoing)",
                    ep.peak_stat, ep.duration);
    }
    std::printf("bubbles in %.0f%% of the monitored period (%d of %d observations)\n",
                100.0 * coverage, static_cast<int>(std::lround(coverage * stats.size())),
                stats.size());

    if (!out_prefix.empty()) {
        json report;
        report["manifest"] = manifest_json("datestamp", opt, cfg, null_spec, s, w0);
        report["manifest"]["level"] = level;
        report["manifest"]["min_duration"] = min_dur;
        report["manifest"]["cv_source"] = from_cache ? cv_cache : "simulated";
        report["episodes"] = json::array();
        for (const auto& ep : episodes) report["episodes"].push_back(episode_to_json(ep, s));
        report["coverage"] = coverage;
        report["coverage_percent"] = 100.0 * coverage;
        report["effective_observations"] = stats.size();
        write_text_atomic(out_prefix + ".episodes.json", report.dump(2) + "\n");

        std::ostringstream csv;
        csv << "episode,origin_index,origin_date,peak_index,peak_date,end_index,end_date,"
               "peak_stat,duration,ongoing\n";
        char buf[64];
        for (std::size_t i = 0; i < episodes.size(); ++i) {
            const auto& ep = episodes[i];
            std::snprintf(buf, sizeof buf, "%.17g", ep.peak_stat);
            csv << (i + 1) << ',' << ep.origin_index << ','
                << format_date(s.dates[static_cast<std::size_t>(ep.origin_index)]) << ','
                << ep.peak_index << ','
                << format_date(s.dates[static_cast<std::size_t>(ep.peak_index)]) << ',';
            if (ep.end_index)
                csv << *ep.end_index << ','
                    << format_date(s.dates[static_cast<std::size_t>(*ep.end_index)]);
            else
                csv << ',';
            csv << ',' << buf << ',' << ep.duration << ',' << (ep.end_index ? 0 : 1) << '\n';
        }
        write_text_atomic(out_prefix + ".episodes.csv", csv.str());

        // Plot data: the statistic and critical-value curves plus the index
        // itself, one row per monitored observation.
        std::ostringstream plot;
        plot << "date,bsadf_stat,cv,value\n";
        for (int i = 0; i < stats.size(); ++i) {
            const int obs = stats.end_indices[static_cast<std::size_t>(i)];
            plot << format_date(s.dates[static_cast<std::size_t>(obs)]) << ',';
            if (stats.stats[static_cast<std::size_t>(i)]) {
                std::snprintf(buf, sizeof buf, "%.17g", *stats.stats[static_cast<std::size_t>(i)]);
                plot << buf;
            }
            plot << ',';
            std::snprintf(buf, sizeof buf, "%.17g", cv.values[static_cast<std::size_t>(i)]);
            plot << buf << ',';
            std::snprintf(buf, sizeof buf, "%.17g", s.values[static_cast<std::size_t>(obs)]);
            plot << buf << '\n';
        }
        write_text_atomic(out_prefix + ".plot.csv", plot.str());
        std::cerr << "episode report and plot data written to " << out_prefix << ".*\n";
    }
    return 0;
}

// ------------------------------------------------------------------ cv ----

int cmd_cv(const CommonOpts& opt, int T, const std::string& which, const std::string& out_path) {
    warn_replications(opt.replications, 1);
    const TestKind test = test_from_name(which);
    TestConfig cfg = build_config(opt);
    if (cfg.adf.lags.kind != LagPolicy::Kind::fixed)
        throw config_error("cv simulation needs --lags, not --lag-bic-max (no observed series "
                           "to select on)");
    if (test == TestKind::radf && !cfg.rolling_width)
        throw config_error("radf needs --rolling-width");
    const NullSpec null_spec;
    const std::string digest = config_digest(cfg, null_spec);

    const CriticalValues cv = critical_values(test, T, cfg, null_spec, opt.replications, opt.seed,
                                              opt.threads, digest);
    std::printf("%-6s T=%d replications=%d seed=%llu\n", test_name(test), T, opt.replications,
                static_cast<unsigned long long>(opt.seed));
    std::printf("%7s %12s\n", "level", "quantile");
    for (const auto& [level, value] : cv.quantiles)
        std::printf("%6d%% %12.4f\n", level, value);

    write_text_atomic(out_path, critical_values_to_json(cv, cfg, null_spec).dump(2) + "\n");
    std::cerr << "cv cache written to " << out_path << "\n";
    return 0;
}

// ------------------------------------------------------------ simulate ----

int cmd_simulate(const std::string& generator, int T, std::uint64_t seed, const json& gen_spec,
                 const std::string& out_path) {
    TimeSeries s;
    json sidecar;
    sidecar["tool"] = "rtadf";
    sidecar["version"] = kVersion;
    sidecar["generator"] = generator;
    sidecar["seed"] = seed;
    sidecar["T"] = T;
    sidecar["spec"] = gen_spec;

    if (generator == "rw") {
        NullSpec spec;
        spec.drift_scale = gen_spec.at("drift_scale").get<double>();
        spec.drift_exponent = gen_spec.at("drift_exponent").get<double>();
        spec.innovation_sd = gen_spec.at("sigma").get<double>();
        s = gen_random_walk(T, spec, seed);
    } else if (generator == "ar1") {
        s = gen_explosive_ar1(T, gen_spec.at("rho").get<double>(),
                              gen_spec.at("sigma").get<double>(),
                              gen_spec.at("regime_start").get<int>(), seed,
                              gen_spec.at("start_level").get<double>());
        sidecar["regime_start"] = gen_spec.at("regime_start").get<int>();
    } else if (generator == "evans") {
        EvansSpec spec;
        spec.r = gen_spec.at("r").get<double>();
        spec.b_threshold = gen_spec.at("b_threshold").get<double>();
        spec.delta = gen_spec.at("delta").get<double>();
        spec.pi = gen_spec.at("pi").get<double>();
        spec.tau = gen_spec.at("tau").get<double>();
        spec.b0 = gen_spec.at("b0").get<double>();
        spec.T = T;
        const EvansSample sample = gen_evans_bubble(spec, seed);
        s = sample.series;
        json mask = json::array();
        for (char m : sample.regime_mask) mask.push_back(m ? 1 : 0);
        sidecar["regime_mask"] = mask;
        sidecar["collapse_indices"] = sample.collapse_indices;
    } else {
        throw config_error("unknown generator '" + generator + "'");
    }
    sidecar["label"] = s.label;

    // Synthetic dates: consecutive days from 2000-01-01 so the file feeds
    // straight back into the test commands.
    const Date base = parse_date("2000-01-01");
    for (int t = 0; t < s.size(); ++t)
        s.dates[static_cast<std::size_t>(t)] = Date{base.serial + t};

    std::ostringstream csv;
    write_csv(s, csv);
    write_text_atomic(out_path, csv.str());
    write_text_atomic(out_path + ".json", sidecar.dump(2) + "\n");
    std::printf("wrote %d observations to %s (sidecar %s.json)\n", s.size(), out_path.c_str(),
                out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"right-tail ADF bubble detection toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonOpts opt;

    // --- test ---
    auto* test_cmd = app.add_subcommand("test", "run the recursive test battery");
    std::string which_test = "all";
    std::string levels_text = "90,95,99";
    std::string out_path;
    add_series_options(test_cmd, opt);
    add_test_options(test_cmd, opt);
    test_cmd->add_option("--test", which_test, "adf|radf|sadf|gsadf|all (default: all)")
        ->check(CLI::IsMember({"adf", "radf", "sadf", "gsadf", "all"}));
    test_cmd->add_option("--rolling-width", opt.rolling_width, "RADF window width");
    test_cmd->add_option("--levels", levels_text, "critical-value levels (default: 90,95,99)");
    test_cmd->add_option("--replications", opt.replications,
                         "null replications (default: 10000)");
    test_cmd->add_option("--seed", opt.seed, "master seed (default: 0)");
    test_cmd->add_option("--out", out_path, "write a JSON report here");

    // --- datestamp ---
    auto* stamp_cmd = app.add_subcommand("datestamp", "date-stamp bubble episodes via BSADF");
    int level = 95;
    int min_duration = 0;
    std::string cv_cache;
    add_series_options(stamp_cmd, opt);
    add_test_options(stamp_cmd, opt);
    stamp_cmd->add_option("--level", level, "critical-value level: 90, 95 (default) or 99");
    stamp_cmd->add_option("--min-duration", min_duration,
                          "minimum episode length (default: floor(ln T))");
    stamp_cmd->add_option("--cv-cache", cv_cache,
                          "cv-sequence cache file: loaded when present, written after "
                          "simulation otherwise");
    stamp_cmd->add_option("--replications", opt.replications,
                          "null replications (default: 10000)");
    stamp_cmd->add_option("--seed", opt.seed, "master seed (default: 0)");
    stamp_cmd->add_option("--out", out_path, "output prefix for .episodes.json/.episodes.csv/.plot.csv")
        ->required();

    // --- cv ---
    auto* cv_cmd = app.add_subcommand("cv", "simulate scalar critical values");
    int cv_T = 0;
    std::string cv_test = "gsadf";
    cv_cmd->add_option("--T", cv_T, "sample length")->required()->check(CLI::PositiveNumber);
    cv_cmd->add_option("--test", cv_test, "adf|radf|sadf|gsadf (default: gsadf)")
        ->check(CLI::IsMember({"adf", "radf", "sadf", "gsadf"}));
    cv_cmd->add_option("--lags", opt.lags, "fixed lagged-difference order k (default: 0)");
    cv_cmd->add_option("--min-window", opt.min_window, "minimum window in observations");
    cv_cmd->add_option("--rolling-width", opt.rolling_width, "RADF window width");
    cv_cmd->add_option("--tail", opt.tail, "right (default) or left")
        ->check(CLI::IsMember({"right", "left"}));
    cv_cmd->add_flag("--trend", opt.trend, "include a linear trend");
    cv_cmd->add_option("--threads", opt.threads, "worker threads (default: all cores)");
    cv_cmd->add_option("--replications", opt.replications, "replications (default: 10000)");
    cv_cmd->add_option("--seed", opt.seed, "master seed (default: 0)");
    cv_cmd->add_option("--out", out_path, "cache file path")->required();

    // --- simulate ---
    auto* sim_cmd = app.add_subcommand("simulate", "generate synthetic series");
    std::string generator;
    int sim_T = 0;
    double drift_scale = 1.0, drift_exponent = 1.0, sigma = 1.0;
    double rho = 1.05, start_level = 0.0;
    int regime_start = 0;
    double ev_r = 0.05, ev_b = 1.0, ev_delta = 0.5, ev_pi = 0.85, ev_tau = 0.05;
    double ev_b0 = -1.0;  // default: delta
    sim_cmd->add_option("generator", generator, "rw|ar1|evans")
        ->required()
        ->check(CLI::IsMember({"rw", "ar1", "evans"}));
    sim_cmd->add_option("--T", sim_T, "series length")->required()->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", opt.seed, "generator seed (default: 0)");
    sim_cmd->add_option("--drift-scale", drift_scale, "rw: drift scale d (default: 1)");
    sim_cmd->add_option("--drift-exponent", drift_exponent, "rw: drift exponent eta (default: 1)");
    sim_cmd->add_option("--sigma", sigma, "rw/ar1: innovation sd (default: 1)");
    sim_cmd->add_option("--rho", rho, "ar1: explosive root (default: 1.05)");
    sim_cmd->add_option("--regime-start", regime_start, "ar1: first explosive index (default: 0)");
    sim_cmd->add_option("--start-level", start_level, "ar1: initial level offset (default: 0)");
    sim_cmd->add_option("--r", ev_r, "evans: growth rate (default: 0.05)");
    sim_cmd->add_option("--b-threshold", ev_b, "evans: explosive threshold (default: 1)");
    sim_cmd->add_option("--delta", ev_delta, "evans: collapse floor (default: 0.5)");
    sim_cmd->add_option("--pi", ev_pi, "evans: survival probability (default: 0.85)");
    sim_cmd->add_option("--tau", ev_tau, "evans: lognormal shock scale (default: 0.05)");
    sim_cmd->add_option("--b0", ev_b0, "evans: initial bubble (default: delta)");
    sim_cmd->add_option("--out", out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    try {
        if (test_cmd->parsed()) return cmd_test(opt, which_test, levels_text, out_path);
        if (stamp_cmd->parsed()) return cmd_datestamp(opt, level, min_duration, cv_cache, out_path);
        if (cv_cmd->parsed()) return cmd_cv(opt, cv_T, cv_test, out_path);
        if (sim_cmd->parsed()) {
            json spec;
            if (generator == "rw")
                spec = {{"drift_scale", drift_scale},
                        {"drift_exponent", drift_exponent},
                        {"sigma", sigma}};
            else if (generator == "ar1")
                spec = {{"rho", rho},
                        {"sigma", sigma},
                        {"regime_start", regime_start},
                        {"start_level", start_level}};
            else
                spec = {{"r", ev_r},
                        {"b_threshold", ev_b},
                        {"delta", ev_delta},
                        {"pi", ev_pi},
                        {"tau", ev_tau},
                        {"b0", ev_b0 > 0.0 ? ev_b0 : ev_delta}};
            return cmd_simulate(generator, sim_T, opt.seed, spec, out_path);
        }
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
