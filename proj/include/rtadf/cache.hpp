#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rtadf/error.hpp"
#include "rtadf/mc.hpp"
#include "rtadf/recursive.hpp"

namespace rtadf {

inline std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h = 0xCBF29CE484222325ULL) {
    const unsigned char* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& text) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(text.data(), text.size())));
    return buf;
}

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline const char* deterministic_name(Deterministic d) {
    return d == Deterministic::constant ? "constant" : "constant_and_trend";
}

inline const char* tail_name(Tail t) { return t == Tail::right ? "right" : "left"; }

// Canonical serialization of TestConfig + NullSpec: sorted keys, floats at 17
// significant digits. The digest of this string keys the critical-value
// cache; recomputation with an equal digest must be byte-identical.
inline std::string canonical_config(const TestConfig& cfg, const NullSpec& null_spec) {
    std::ostringstream out;
    out << "{\"adf\":{"
        << "\"deterministic\":\"" << deterministic_name(cfg.adf.deterministic) << "\","
        << "\"lag_kind\":\"" << (cfg.adf.lags.kind == LagPolicy::Kind::fixed ? "fixed" : "bic")
        << "\",\"lag_value\":" << cfg.adf.lags.value << ","
        << "\"tail\":\"" << tail_name(cfg.adf.tail) << "\"},"
        << "\"min_window_rule\":\""
        << (cfg.min_window_rule == WindowRule::psy_default ? "psy_default" : "fixed") << "\","
        << "\"min_window_value\":" << cfg.min_window << ","
        << "\"null\":{"
        << "\"drift_exponent\":" << format_g17(null_spec.drift_exponent) << ","
        << "\"drift_scale\":" << format_g17(null_spec.drift_scale) << ","
        << "\"innovation_sd\":" << format_g17(null_spec.innovation_sd) << "},"
        << "\"rolling_width\":";
    if (cfg.rolling_width) out << *cfg.rolling_width;
    else out << "null";
    out << "}";
    return out.str();
}

inline std::string config_digest(const TestConfig& cfg, const NullSpec& null_spec) {
    return fnv1a64_hex(canonical_config(cfg, null_spec));
}

inline nlohmann::json config_to_json(const TestConfig& cfg, const NullSpec& null_spec) {
    return nlohmann::json::parse(canonical_config(cfg, null_spec));
}

// Failure must not leave a result file behind: write a sibling temp file,
// then rename into place.
inline void write_text_atomic(const std::string& path, const std::string& text) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw input_error("cannot write '" + tmp.string() + "'");
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw input_error("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw input_error("cannot move results into '" + path + "'");
    }
}

inline nlohmann::json critical_values_to_json(const CriticalValues& cv, const TestConfig& cfg,
                                              const NullSpec& null_spec) {
    nlohmann::json j;
    j["kind"] = "critical_values";
    j["test"] = test_name(cv.test);
    j["T"] = cv.T;
    j["replications"] = cv.replications;
    j["seed"] = cv.seed;
    j["config"] = config_to_json(cfg, null_spec);
    j["config_digest"] = cv.config_digest;
    nlohmann::json q;
    for (const auto& [level, value] : cv.quantiles) q[std::to_string(level)] = value;
    j["quantiles"] = q;
    return j;
}

inline nlohmann::json cv_sequence_to_json(const CvSequence& cv, const TestConfig& cfg,
                                          const NullSpec& null_spec) {
    nlohmann::json j;
    j["kind"] = "cv_sequence";
    j["level"] = cv.level;
    j["T"] = cv.T;
    j["replications"] = cv.replications;
    j["seed"] = cv.seed;
    j["config"] = config_to_json(cfg, null_spec);
    j["config_digest"] = cv.config_digest;
    j["end_indices"] = cv.end_indices;
    j["values"] = cv.values;
    return j;
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("'" + path + "': invalid JSON: " + e.what());
    }
    return j;
}

inline CriticalValues critical_values_from_json(const nlohmann::json& j) {
    try {
        if (j.at("kind") != "critical_values")
            throw input_error("not a critical-values document");
        CriticalValues cv;
        cv.test = test_from_name(j.at("test").get<std::string>());
        cv.T = j.at("T").get<int>();
        cv.replications = j.at("replications").get<int>();
        cv.seed = j.at("seed").get<std::uint64_t>();
        cv.config_digest = j.at("config_digest").get<std::string>();
        for (const auto& [key, value] : j.at("quantiles").items())
            cv.quantiles[std::stoi(key)] = value.get<double>();
        return cv;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("bad critical-values document: ") + e.what());
    }
}

inline CvSequence cv_sequence_from_json(const nlohmann::json& j) {
    try {
        if (j.at("kind") != "cv_sequence") throw input_error("not a cv-sequence document");
        CvSequence cv;
        cv.level = j.at("level").get<int>();
        cv.T = j.at("T").get<int>();
        cv.replications = j.at("replications").get<int>();
        cv.seed = j.at("seed").get<std::uint64_t>();
        cv.config_digest = j.at("config_digest").get<std::string>();
        cv.end_indices = j.at("end_indices").get<std::vector<int>>();
        cv.values = j.at("values").get<std::vector<double>>();
        if (cv.end_indices.size() != cv.values.size())
            throw input_error("cv sequence: index/value length mismatch");
        return cv;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("bad cv-sequence document: ") + e.what());
    }
}

inline std::string hash_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open '" + path + "'");
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
    char out[32];
    std::snprintf(out, sizeof out, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return out;
}

}  // namespace rtadf
