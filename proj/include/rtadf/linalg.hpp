#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rtadf {

// Numeric thresholds shared by the direct (QR) and incremental (cross-moment)
// regression paths, so both flag the same windows as degenerate.
inline constexpr double kRankRelTol = 1e-10;  // triangular-factor diagonal, relative to max
inline constexpr double kRssRelTol = 1e-14;   // residual sum of squares, relative to y'y

// Row-major dense matrix, just enough for small regression designs.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

namespace detail {

// Householder QR of an m x p matrix (m >= p), factors computed in place.
// R ends up in the upper triangle; the reflectors stay in the lower part and
// in tau. Rank is judged from |R_ii| against kRankRelTol * max_j |R_jj|.
struct HouseholderQr {
    Matrix a;
    std::vector<double> tau;
    std::size_t rank = 0;

    explicit HouseholderQr(Matrix m) : a(std::move(m)), tau(a.cols, 0.0) {
        const std::size_t rows = a.rows, cols = a.cols;
        for (std::size_t k = 0; k < cols; ++k) {
            double norm = 0.0;
            for (std::size_t i = k; i < rows; ++i) norm += a(i, k) * a(i, k);
            norm = std::sqrt(norm);
            if (norm == 0.0) { tau[k] = 0.0; continue; }
            const double alpha = a(k, k) >= 0 ? -norm : norm;
            const double v0 = a(k, k) - alpha;
            a(k, k) = alpha;
            if (v0 == 0.0) { tau[k] = 0.0; continue; }
            // Normalized reflector v = (1, a(k+1..m,k)/v0); tau = -v0/alpha.
            for (std::size_t i = k + 1; i < rows; ++i) a(i, k) /= v0;
            tau[k] = -v0 / alpha;
            for (std::size_t j = k + 1; j < cols; ++j) {
                double dot = a(k, j);
                for (std::size_t i = k + 1; i < rows; ++i) dot += a(i, k) * a(i, j);
                const double scale = tau[k] * dot;
                a(k, j) -= scale;
                for (std::size_t i = k + 1; i < rows; ++i) a(i, j) -= scale * a(i, k);
            }
        }
        double max_diag = 0.0;
        for (std::size_t k = 0; k < cols; ++k) max_diag = std::max(max_diag, std::fabs(a(k, k)));
        rank = cols;
        for (std::size_t k = 0; k < cols; ++k)
            if (std::fabs(a(k, k)) <= kRankRelTol * max_diag) rank = std::min(rank, k);
    }

    bool full_rank() const { return rank == a.cols; }

    // Applies Q' to a copy of y.
    std::vector<double> qt(const std::vector<double>& y) const {
        std::vector<double> w = y;
        for (std::size_t k = 0; k < a.cols; ++k) {
            if (tau[k] == 0.0) continue;
            double dot = w[k];
            for (std::size_t i = k + 1; i < a.rows; ++i) dot += a(i, k) * w[i];
            const double scale = tau[k] * dot;
            w[k] -= scale;
            for (std::size_t i = k + 1; i < a.rows; ++i) w[i] -= scale * a(i, k);
        }
        return w;
    }

    // Solves R x = b (upper triangular back substitution).
    std::vector<double> solve_r(const std::vector<double>& b) const {
        const std::size_t p = a.cols;
        std::vector<double> x(p, 0.0);
        for (std::size_t ki = p; ki-- > 0;) {
            double v = b[ki];
            for (std::size_t j = ki + 1; j < p; ++j) v -= a(ki, j) * x[j];
            x[ki] = v / a(ki, ki);
        }
        return x;
    }

    // Diagonal of (X'X)^{-1} = diag of R^{-1} R^{-T}: column j is
    // ||R^{-T} e_j||^2, via forward substitution on R'.
    std::vector<double> normal_inverse_diagonal() const {
        const std::size_t p = a.cols;
        std::vector<double> diag(p, 0.0);
        std::vector<double> v(p, 0.0);
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t i = 0; i < p; ++i) v[i] = 0.0;
            for (std::size_t i = j; i < p; ++i) {
                double rhs = (i == j) ? 1.0 : 0.0;
                for (std::size_t kk = j; kk < i; ++kk) rhs -= a(kk, i) * v[kk];
                v[i] = rhs / a(i, i);
            }
            double acc = 0.0;
            for (std::size_t i = j; i < p; ++i) acc += v[i] * v[i];
            diag[j] = acc;
        }
        return diag;
    }
};

// Cyclic Jacobi eigendecomposition of a symmetric p x p matrix. Only used on
// degenerate designs, where a minimum-norm solution is wanted; p is tiny.
inline void jacobi_eigen(Matrix s, std::vector<double>& eigenvalues, Matrix& eigenvectors) {
    const std::size_t p = s.rows;
    eigenvectors = Matrix(p, p);
    for (std::size_t i = 0; i < p; ++i) eigenvectors(i, i) = 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j) off += s(i, j) * s(i, j);
        if (off < 1e-30) break;
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i + 1; j < p; ++j) {
                if (s(i, j) == 0.0) continue;
                const double theta = (s(j, j) - s(i, i)) / (2.0 * s(i, j));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < p; ++k) {
                    const double ski = s(k, i), skj = s(k, j);
                    s(k, i) = c * ski - sn * skj;
                    s(k, j) = sn * ski + c * skj;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double sik = s(i, k), sjk = s(j, k);
                    s(i, k) = c * sik - sn * sjk;
                    s(j, k) = sn * sik + c * sjk;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double vki = eigenvectors(k, i), vkj = eigenvectors(k, j);
                    eigenvectors(k, i) = c * vki - sn * vkj;
                    eigenvectors(k, j) = sn * vki + c * vkj;
                }
            }
        }
    }
    eigenvalues.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) eigenvalues[i] = s(i, i);
}

}  // namespace detail

}  // namespace rtadf
