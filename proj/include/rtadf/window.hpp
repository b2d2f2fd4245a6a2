#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rtadf/adf.hpp"
#include "rtadf/linalg.hpp"

namespace rtadf {

// Preprocessed series shared by all window scans of one recursive run:
// centered levels, first differences, lag order and deterministic terms.
// Centering and the t/T trend column are exact invariances of the t-ratio
// and keep the cross-moment matrix well conditioned. Read-only after
// construction, safe to share across threads.
struct AdfSeriesContext {
    std::vector<double> y;   // centered levels
    std::vector<double> dy;  // first differences (dy[0] unused)
    int lags = 0;
    bool trend = false;
    int regressors = 2;
    double inv_t_scale = 1.0;

    AdfSeriesContext(std::span<const double> values, int k, Deterministic det)
        : lags(k),
          trend(det == Deterministic::constant_and_trend),
          regressors(2 + k + (det == Deterministic::constant_and_trend ? 1 : 0)),
          inv_t_scale(values.empty() ? 1.0 : 1.0 / static_cast<double>(values.size())) {
        const std::size_t n = values.size();
        double mean = 0.0;
        for (double v : values) mean += v;
        if (n > 0) mean /= static_cast<double>(n);
        y.resize(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = values[i] - mean;
        dy.assign(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) dy[i] = y[i] - y[i - 1];
    }
};

// Incremental ADF statistic over contiguous regression samples.
//
// Keeps running cross-moments of (regressors, response) rows; extending a
// window by one observation is an O(p^2) update, and each statistic query
// solves the p x p normal equations from the sums. This turns the O(T^2)
// window family of the recursive tests into constant-size work per window
// instead of a fresh regression fit. Rows are only ever added, never
// removed, so backward scans at a fixed window end accumulate without
// cancellation.
//
// Degeneracy uses the same thresholds as the direct QR path (linalg.hpp):
// a Cholesky pivot below kRankRelTol of the largest, or a residual sum of
// squares below kRssRelTol of the response's, yields "missing", never a
// number. Regressor layout matches adf.hpp: [const, y_{t-1}, dy lags, trend].
class AdfWindowEngine {
public:
    explicit AdfWindowEngine(const AdfSeriesContext& ctx)
        : ctx_(&ctx), p_(ctx.regressors), dim_(ctx.regressors + 1) {
        sums_.assign(static_cast<std::size_t>(dim_ * (dim_ + 1) / 2), 0.0);
        row_.assign(static_cast<std::size_t>(dim_), 0.0);
        chol_.assign(static_cast<std::size_t>(p_ * p_), 0.0);
        coef_.assign(static_cast<std::size_t>(p_), 0.0);
        work_.assign(static_cast<std::size_t>(p_), 0.0);
    }

    int rows() const { return m_; }

    void reset() {
        std::fill(sums_.begin(), sums_.end(), 0.0);
        m_ = 0;
    }

    // Adds the regression row with response dy_t; valid for t >= lags + 1.
    void add_obs(int t) {
        const int k = ctx_->lags;
        double* r = row_.data();
        r[0] = 1.0;
        r[1] = ctx_->y[static_cast<std::size_t>(t - 1)];
        for (int i = 1; i <= k; ++i) r[1 + i] = ctx_->dy[static_cast<std::size_t>(t - i)];
        if (ctx_->trend) r[p_ - 1] = static_cast<double>(t) * ctx_->inv_t_scale;
        r[p_] = ctx_->dy[static_cast<std::size_t>(t)];
        double* s = sums_.data();
        for (int i = 0; i < dim_; ++i) {
            const double ri = r[i];
            for (int j = i; j < dim_; ++j) *s++ += ri * r[j];
        }
        ++m_;
    }

    // t-ratio of the lagged-level coefficient for the current sample,
    // or nullopt when the window is degenerate.
    std::optional<double> stat() const {
        if (m_ < p_ + 2) return std::nullopt;
        const double* s = sums_.data();
        const int dim = dim_;
        auto at = [s, dim](int i, int j) {  // i <= j
            return s[i * dim - i * (i - 1) / 2 + (j - i)];
        };
        // Cholesky G = L L' on the regressor block.
        double* L = chol_.data();
        double max_pivot = 0.0, min_pivot = 0.0;
        for (int i = 0; i < p_; ++i) {
            for (int j = 0; j <= i; ++j) {
                double acc = at(j, i);
                for (int t = 0; t < j; ++t) acc -= L[i * p_ + t] * L[j * p_ + t];
                if (i == j) {
                    if (acc <= 0.0) return std::nullopt;
                    const double piv = std::sqrt(acc);
                    L[i * p_ + i] = piv;
                    if (i == 0) {
                        max_pivot = min_pivot = piv;
                    } else {
                        max_pivot = std::max(max_pivot, piv);
                        min_pivot = std::min(min_pivot, piv);
                    }
                } else {
                    L[i * p_ + j] = acc / L[j * p_ + j];
                }
            }
        }
        if (min_pivot <= kRankRelTol * max_pivot) return std::nullopt;

        // Solve L L' b = X'y.
        double* b = coef_.data();
        for (int i = 0; i < p_; ++i) {
            double acc = at(i, p_);
            for (int t = 0; t < i; ++t) acc -= L[i * p_ + t] * b[t];
            b[i] = acc / L[i * p_ + i];
        }
        for (int i = p_ - 1; i >= 0; --i) {
            double acc = b[i];
            for (int t = i + 1; t < p_; ++t) acc -= L[t * p_ + i] * b[t];
            b[i] = acc / L[i * p_ + i];
        }

        const double dd = at(p_, p_);
        double rss = dd;
        for (int i = 0; i < p_; ++i) rss -= b[i] * at(i, p_);
        if (rss < 0.0) rss = 0.0;
        if (rss <= kRssRelTol * dd) return std::nullopt;
        const double sigma2 = rss / static_cast<double>(m_ - p_);

        // (G^{-1})_{beta,beta} = ||L^{-1} e_beta||^2 by forward substitution.
        double* w = work_.data();
        double norm2 = 0.0;
        for (int i = 0; i < p_; ++i) {
            double acc = i == detail::kLaggedLevelIndex ? 1.0 : 0.0;
            for (int t = 0; t < i; ++t) acc -= L[i * p_ + t] * w[t];
            w[i] = acc / L[i * p_ + i];
            norm2 += w[i] * w[i];
        }
        const double se = std::sqrt(sigma2 * norm2);
        if (!(se > 0.0)) return std::nullopt;
        return b[detail::kLaggedLevelIndex] / se;
    }

private:
    const AdfSeriesContext* ctx_;
    int p_;
    int dim_;
    int m_ = 0;
    std::vector<double> sums_;
    mutable std::vector<double> row_, chol_, coef_, work_;
};

}  // namespace rtadf
