#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rtadf/linalg.hpp"

namespace rtadf {

struct RegressionResult {
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    double residual_variance = 0.0;
    int n_obs = 0;
    // Set when the design is rank-deficient or the residual variance is
    // numerically zero; the t-ratio is undefined and callers must not use it.
    bool degenerate = false;
};

// Least squares of response on design, homoskedastic standard errors with an
// n - p denominator. Rank-deficient designs get a minimum-norm coefficient
// vector (eigen pseudo-inverse of the normal matrix) and degenerate = true.
inline RegressionResult ols_fit(const Matrix& design, const std::vector<double>& response) {
    const std::size_t m = design.rows, p = design.cols;
    if (m != response.size()) throw std::invalid_argument("ols_fit: dimension mismatch");
    if (p == 0 || m < p + 1) throw std::invalid_argument("ols_fit: too few observations");

    RegressionResult result;
    result.n_obs = static_cast<int>(m);

    double yty = 0.0;
    for (double v : response) yty += v * v;

    detail::HouseholderQr qr(design);
    if (qr.full_rank()) {
        const std::vector<double> qty = qr.qt(response);
        result.coefficients = qr.solve_r(qty);
        double rss = 0.0;
        for (std::size_t i = p; i < m; ++i) rss += qty[i] * qty[i];
        if (rss < 0.0) rss = 0.0;
        result.residual_variance = rss / static_cast<double>(m - p);
        const auto inv_diag = qr.normal_inverse_diagonal();
        result.standard_errors.resize(p);
        for (std::size_t j = 0; j < p; ++j)
            result.standard_errors[j] = std::sqrt(std::max(0.0, result.residual_variance * inv_diag[j]));
        if (rss <= kRssRelTol * yty) result.degenerate = true;
        return result;
    }

    // Degenerate path: X'X eigendecomposition, pinv(X'X) X'y is the
    // minimum-norm least-squares solution.
    Matrix gram(p, p);
    std::vector<double> xty(p, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            xty[j] += design(i, j) * response[i];
            for (std::size_t k = j; k < p; ++k) gram(j, k) += design(i, j) * design(i, k);
        }
    }
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < j; ++k) gram(j, k) = gram(k, j);

    std::vector<double> eigenvalues;
    Matrix vectors;
    detail::jacobi_eigen(gram, eigenvalues, vectors);
    double max_eig = 0.0;
    for (double e : eigenvalues) max_eig = std::max(max_eig, e);
    const double cutoff = max_eig * kRankRelTol * kRankRelTol;

    std::vector<double> vt_xty(p, 0.0);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < p; ++i) vt_xty[j] += vectors(i, j) * xty[i];
    result.coefficients.assign(p, 0.0);
    std::vector<double> pinv_diag(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        const double inv = eigenvalues[j] > cutoff ? 1.0 / eigenvalues[j] : 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            result.coefficients[i] += vectors(i, j) * inv * vt_xty[j];
            pinv_diag[i] += vectors(i, j) * vectors(i, j) * inv;
        }
    }

    double rss = yty;
    for (std::size_t j = 0; j < p; ++j) rss -= result.coefficients[j] * xty[j];
    if (rss < 0.0) rss = 0.0;
    result.residual_variance = rss / static_cast<double>(m - p);
    result.standard_errors.resize(p);
    for (std::size_t j = 0; j < p; ++j)
        result.standard_errors[j] = std::sqrt(std::max(0.0, result.residual_variance * pinv_diag[j]));
    result.degenerate = true;
    return result;
}

}  // namespace rtadf
