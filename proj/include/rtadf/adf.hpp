#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rtadf/error.hpp"
#include "rtadf/ols.hpp"
#include "rtadf/series.hpp"

namespace rtadf {

enum class Deterministic { constant, constant_and_trend };
enum class Tail { right, left };

struct LagPolicy {
    enum class Kind { fixed, bic } kind = Kind::fixed;
    int value = 0;  // fixed: lag order k; bic: k_max

    static LagPolicy fixed(int k) { return {Kind::fixed, k}; }
    static LagPolicy bic(int k_max) { return {Kind::bic, k_max}; }
};

// Specification of the ADF regression
//   dy_t = alpha + beta * y_{t-1} + sum_{i=1..k} phi_i * dy_{t-i} [+ gamma * t] + e_t
// with statistic beta_hat / se(beta_hat). The tail only chooses the rejection
// region downstream; the number itself is tail-independent.
struct AdfSpec {
    LagPolicy lags = LagPolicy::fixed(0);
    Deterministic deterministic = Deterministic::constant;
    Tail tail = Tail::right;
};

inline int regressor_count(const AdfSpec& spec, int k) {
    return 2 + k + (spec.deterministic == Deterministic::constant_and_trend ? 1 : 0);
}

// Smallest window length that leaves n - 1 - k effective observations with
// at least regressors + 2 degrees of slack.
inline int min_estimable_length(const AdfSpec& spec, int k) {
    return regressor_count(spec, k) + k + 3;
}

namespace detail {

// Regressor layout: [const, y_{t-1}, dy_{t-1}, ..., dy_{t-k}, trend].
// The trend column is t / scale; rescaling a regressor leaves every t-ratio
// unchanged and keeps the cross-moment matrix well conditioned.
inline constexpr int kLaggedLevelIndex = 1;

inline void build_adf_design(std::span<const double> y, int k, Deterministic det,
                             Matrix& design, std::vector<double>& response,
                             double trend_offset = 0.0, double trend_scale = 1.0) {
    const int n = static_cast<int>(y.size());
    const int m = n - 1 - k;
    const bool trend = det == Deterministic::constant_and_trend;
    const int p = 2 + k + (trend ? 1 : 0);
    design = Matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(p));
    response.resize(static_cast<std::size_t>(m));
    for (int row = 0; row < m; ++row) {
        const int t = row + k + 1;
        design(row, 0) = 1.0;
        design(row, 1) = y[t - 1];
        for (int i = 1; i <= k; ++i)
            design(row, 1 + i) = y[t - i] - y[t - i - 1];
        if (trend) design(row, static_cast<std::size_t>(p - 1)) = (trend_offset + t) / trend_scale;
        response[static_cast<std::size_t>(row)] = y[t] - y[t - 1];
    }
}

inline double adf_t_ratio_fixed_k(std::span<const double> y, int k, Deterministic det) {
    Matrix design;
    std::vector<double> response;
    build_adf_design(y, k, det, design, response);
    const RegressionResult fit = ols_fit(design, response);
    if (fit.degenerate || fit.standard_errors[kLaggedLevelIndex] <= 0.0)
        throw numeric_error("degenerate window");
    return fit.coefficients[kLaggedLevelIndex] / fit.standard_errors[kLaggedLevelIndex];
}

}  // namespace detail

// BIC over k = 0..k_max, every candidate fit on the common effective sample
// implied by k_max. Degenerate candidates are skipped. Exposed for tests.
inline std::vector<double> bic_values(std::span<const double> y, int k_max, Deterministic det) {
    const int n = static_cast<int>(y.size());
    if (k_max < 0) throw config_error("select_lag_bic: k_max must be >= 0");
    const bool trend = det == Deterministic::constant_and_trend;
    const int p_max = 2 + k_max + (trend ? 1 : 0);
    const int m = n - 1 - k_max;
    if (m < p_max + 2)
        throw config_error("select_lag_bic: window of length " + std::to_string(n) +
                           " too short for k_max=" + std::to_string(k_max));
    std::vector<double> bics;
    bics.reserve(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
        const int p = 2 + k + (trend ? 1 : 0);
        Matrix design(static_cast<std::size_t>(m), static_cast<std::size_t>(p));
        std::vector<double> response(static_cast<std::size_t>(m));
        for (int row = 0; row < m; ++row) {
            const int t = row + k_max + 1;
            design(row, 0) = 1.0;
            design(row, 1) = y[t - 1];
            for (int i = 1; i <= k; ++i)
                design(row, static_cast<std::size_t>(1 + i)) = y[t - i] - y[t - i - 1];
            if (trend) design(row, static_cast<std::size_t>(p - 1)) = t;
            response[static_cast<std::size_t>(row)] = y[t] - y[t - 1];
        }
        const RegressionResult fit = ols_fit(design, response);
        if (fit.degenerate) {
            bics.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        const double rss = fit.residual_variance * static_cast<double>(m - p);
        bics.push_back(static_cast<double>(m) * std::log(rss / static_cast<double>(m)) +
                       static_cast<double>(p) * std::log(static_cast<double>(m)));
    }
    return bics;
}

inline int select_lag_bic(std::span<const double> y, int k_max, Deterministic det) {
    const std::vector<double> bics = bic_values(y, k_max, det);
    int best = -1;
    for (int k = 0; k <= k_max; ++k) {
        if (!std::isfinite(bics[static_cast<std::size_t>(k)])) continue;
        if (best < 0 || bics[static_cast<std::size_t>(k)] <
                            bics[static_cast<std::size_t>(best)])
            best = k;  // strict comparison breaks ties toward smaller k
    }
    if (best < 0) throw numeric_error("select_lag_bic: every candidate regression degenerate");
    return best;
}

inline int select_lag_bic(const TimeSeries& window, int k_max, Deterministic det) {
    return select_lag_bic(std::span<const double>(window.values), k_max, det);
}

inline int resolve_lags(std::span<const double> y, const AdfSpec& spec) {
    if (spec.lags.kind == LagPolicy::Kind::fixed) {
        if (spec.lags.value < 0) throw config_error("lag order must be >= 0");
        return spec.lags.value;
    }
    return select_lag_bic(y, spec.lags.value, spec.deterministic);
}

// The ADF t-ratio on one window. Degenerate regressions (rank deficiency or
// numerically zero residual variance) raise numeric_error rather than
// returning an infinite statistic.
inline double adf_statistic(std::span<const double> y, const AdfSpec& spec) {
    const int k = resolve_lags(y, spec);
    const int n = static_cast<int>(y.size());
    const int p = regressor_count(spec, k);
    if (n - 1 - k < p + 2)
        throw config_error("adf_statistic: window of length " + std::to_string(n) +
                           " too short for k=" + std::to_string(k));
    for (double v : y)
        if (!std::isfinite(v)) throw input_error("adf_statistic: non-finite value in window");
    return detail::adf_t_ratio_fixed_k(y, k, spec.deterministic);
}

inline double adf_statistic(const TimeSeries& window, const AdfSpec& spec) {
    return adf_statistic(std::span<const double>(window.values), spec);
}

}  // namespace rtadf
