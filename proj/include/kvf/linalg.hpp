#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "kvf/errors.hpp"
#include "kvf/tolerances.hpp"

namespace kvf {

using Vec = std::vector<double>;

// ---------------------------------------------------------------------------
// vector helpers
// ---------------------------------------------------------------------------

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: vector sizes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec add(Vec a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("add: vector sizes differ");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Vec sub(Vec a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("sub: vector sizes differ");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Vec scaled(double c, Vec a) {
    for (double& x : a) x *= c;
    return a;
}

/// y += c * x
inline void axpy(double c, const Vec& x, Vec& y) {
    if (x.size() != y.size()) throw DimensionMismatch("axpy: vector sizes differ");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline bool all_finite(const Vec& a) {
    return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

// ---------------------------------------------------------------------------
// dense row-major matrix
// ---------------------------------------------------------------------------

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Vec col(std::size_t j) const {
        Vec c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void set_col(std::size_t j, const Vec& c) {
        if (c.size() != rows_) throw DimensionMismatch("set_col: wrong length");
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product: inner dimensions differ");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Vec operator*(const Matrix& a, const Vec& x) {
        if (a.cols_ != x.size()) throw DimensionMismatch("matrix-vector product: dimensions differ");
        Vec y(a.rows_, 0.0);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum: shapes differ");
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix difference: shapes differ");
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
        return a;
    }

    friend Matrix operator*(double c, Matrix a) {
        for (double& x : a.a_) x *= c;
        return a;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

inline double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

/// a b^T
inline Matrix outer(const Vec& a, const Vec& b) {
    Matrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
    return m;
}

// ---------------------------------------------------------------------------
// symmetric eigendecomposition (cyclic Jacobi)
// ---------------------------------------------------------------------------

struct SymEig {
    Vec eigenvalues;     ///< descending
    Matrix eigenvectors; ///< orthonormal columns, column i pairs with eigenvalue i
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace detail

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.
///
/// The input must be symmetric within 1e-12 * ||S||_F; it is then replaced by
/// its symmetric part before iterating. Eigenvalues come out descending, ties
/// keep the order in which the diagonal produced them.
inline SymEig sym_eigendecompose(const Matrix& s_in, const ToleranceConfig& tol = {}) {
    tol.validate();
    if (s_in.rows() != s_in.cols()) throw DimensionMismatch("sym_eigendecompose: matrix not square");
    const std::size_t n = s_in.rows();
    if (n == 0) throw DimensionMismatch("sym_eigendecompose: empty matrix");

    const double input_norm = frobenius_norm(s_in);
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double d = s_in(i, j) - s_in(j, i);
            asym += d * d;
        }
    asym = std::sqrt(asym);
    if (asym > 1e-12 * input_norm) {
        throw NonSymmetricInput("sym_eigendecompose: asymmetry " + std::to_string(asym) +
                                " exceeds 1e-12 * ||S|| = " + std::to_string(1e-12 * input_norm));
    }

    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (s_in(i, j) + s_in(j, i));
    Matrix v = Matrix::identity(n);

    const double threshold = tol.eig_convergence * input_norm;
    const int max_sweeps = 100;
    bool converged = detail::off_diagonal_norm(a) <= threshold;

    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // rotation angle that annihilates a(p,q)
                const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                for (std::size_t r = 0; r < n; ++r) {
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - sn * arq;
                    a(r, q) = sn * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double apr = a(p, r);
                    const double aqr = a(q, r);
                    a(p, r) = c * apr - sn * aqr;
                    a(q, r) = sn * apr + c * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - sn * vrq;
                    v(r, q) = sn * vrp + c * vrq;
                }
            }
        }
        converged = detail::off_diagonal_norm(a) <= threshold;
    }
    if (!converged) {
        throw NoConvergence("sym_eigendecompose: off-diagonal norm still above threshold after 100 sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// least squares
// ---------------------------------------------------------------------------

struct LeastSquaresSolution {
    Vec x;
    double residual_norm = 0.0;
    std::size_t nullity = 0; ///< q - numerical rank of A
};

/// Minimum-norm least-squares solution of A x = b.
///
/// Solved through the eigendecomposition of the Gram matrix A^T A; the
/// numerical rank uses singular values (square roots of its eigenvalues)
/// cut at rank_tol relative to the largest.
inline LeastSquaresSolution solve_least_squares(const Matrix& a, const Vec& b,
                                                const ToleranceConfig& tol = {}) {
    tol.validate();
    const std::size_t p = a.rows();
    const std::size_t q = a.cols();
    if (p == 0 || q == 0) throw DimensionMismatch("solve_least_squares: empty matrix");
    if (b.size() != p) throw DimensionMismatch("solve_least_squares: right-hand side has wrong length");

    // Gram matrix, exactly symmetric as computed
    Matrix g(q, q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i; j < q; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < p; ++r) s += a(r, i) * a(r, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    Vec atb(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < p; ++r) s += a(r, j) * b[r];
        atb[j] = s;
    }

    const SymEig eig = sym_eigendecompose(g, tol);
    const double lambda_max = std::max(eig.eigenvalues.front(), 0.0);
    // sigma_i > rank_tol * sigma_max  <=>  lambda_i > rank_tol^2 * lambda_max
    const double cutoff = tol.rank_tol * tol.rank_tol * lambda_max;

    std::size_t rank = 0;
    Vec x(q, 0.0);
    for (std::size_t i = 0; i < q; ++i) {
        const double lambda = eig.eigenvalues[i];
        if (!(lambda > cutoff) || lambda <= 0.0) continue;
        ++rank;
        const Vec vi = eig.eigenvectors.col(i);
        axpy(dot(vi, atb) / lambda, vi, x);
    }

    Vec r = a * x;
    for (std::size_t i = 0; i < p; ++i) r[i] -= b[i];
    return LeastSquaresSolution{std::move(x), norm(r), q - rank};
}

// ---------------------------------------------------------------------------
// orthonormalization
// ---------------------------------------------------------------------------

/// Modified Gram-Schmidt: orthonormalize `vectors` in place against `fixed`
/// and against each other. Vectors whose remainder drops below `drop_tol`
/// (relative to their original norm) are removed.
inline std::vector<Vec> mgs_orthonormalize(std::vector<Vec> vectors,
                                           const std::vector<Vec>& fixed = {},
                                           double drop_tol = 1e-10) {
    std::vector<Vec> kept;
    kept.reserve(vectors.size());
    for (Vec& w : vectors) {
        const double original = norm(w);
        if (original == 0.0) continue;
        for (const Vec& u : fixed) axpy(-dot(u, w), u, w);
        for (const Vec& u : kept) axpy(-dot(u, w), u, w);
        // second pass for orthogonality at working precision
        for (const Vec& u : fixed) axpy(-dot(u, w), u, w);
        for (const Vec& u : kept) axpy(-dot(u, w), u, w);
        const double remainder = norm(w);
        if (remainder <= drop_tol * original) continue;
        kept.push_back(scaled(1.0 / remainder, w));
    }
    return kept;
}

} // namespace kvf
