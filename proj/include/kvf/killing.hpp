#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "kvf/linalg.hpp"

namespace kvf {

// ---------------------------------------------------------------------------
// Euclidean Killing fields
// ---------------------------------------------------------------------------

/// A Killing vector field of flat Euclidean space: X(p) = R p + v with R
/// skew-symmetric. Skewness is checked at construction (within
/// 1e-12 * max(1, ||R||_F)) and the stored matrix is exactly
/// skew-symmetrized.
class EuclideanKillingField {
public:
    EuclideanKillingField(Matrix skew, Vec translation)
        : skew_(std::move(skew)), translation_(std::move(translation)) {
        if (skew_.rows() != skew_.cols())
            throw DimensionMismatch("EuclideanKillingField: skew matrix must be square");
        if (skew_.rows() == 0)
            throw DimensionMismatch("EuclideanKillingField: ambient dimension must be >= 1");
        if (translation_.size() != skew_.rows())
            throw DimensionMismatch("EuclideanKillingField: translation length differs from matrix size");
        if (!all_finite(translation_))
            throw Error("EuclideanKillingField: translation has non-finite entries");

        double asym = 0.0;
        for (std::size_t i = 0; i < skew_.rows(); ++i)
            for (std::size_t j = 0; j < skew_.cols(); ++j) {
                const double d = skew_(i, j) + skew_(j, i);
                asym += d * d;
            }
        asym = std::sqrt(asym);
        const double scale = std::max(1.0, frobenius_norm(skew_));
        if (asym > 1e-12 * scale) {
            throw NonSkewSymmetricInput(
                "EuclideanKillingField: matrix violates skew-symmetry, ||R + R^T||_F = " +
                std::to_string(asym));
        }
        for (std::size_t i = 0; i < skew_.rows(); ++i) {
            skew_(i, i) = 0.0;
            for (std::size_t j = i + 1; j < skew_.cols(); ++j) {
                const double w = 0.5 * (skew_(i, j) - skew_(j, i));
                skew_(i, j) = w;
                skew_(j, i) = -w;
            }
        }
    }

    std::size_t dim() const { return skew_.rows(); }
    const Matrix& skew() const { return skew_; }
    const Vec& translation() const { return translation_; }

private:
    Matrix skew_;
    Vec translation_;
};

/// X(p) = R p + v
inline Vec evaluate(const EuclideanKillingField& field, const Vec& p) {
    if (p.size() != field.dim()) throw DimensionMismatch("evaluate: point has wrong dimension");
    Vec x = field.skew() * p;
    axpy(1.0, field.translation(), x);
    return x;
}

// ---------------------------------------------------------------------------
// canonical frame
// ---------------------------------------------------------------------------

/// One R-invariant 2-plane: R e = w f, R f = -w e with frequency w > 0.
struct InvariantPlane {
    double frequency = 0.0;
    Vec e;
    Vec f;
};

/// Adapted orthonormal frame of a Killing field: the ambient space splits
/// into N invariant 2-planes (complex coordinates z_j, frequencies w_j,
/// descending) plus the kernel of R (dimension k, 2N + k = m). The center
/// shifts the origin so the rotational part of the translation disappears;
/// what remains of v is its kernel component, stored in kernel-basis
/// coordinates.
struct CanonicalFrame {
    std::size_t ambient_dim = 0;
    std::vector<InvariantPlane> planes;
    std::vector<Vec> kernel_basis;
    Vec center;
    Vec v_ker;

    std::size_t plane_count() const { return planes.size(); }
    std::size_t kernel_dim() const { return kernel_basis.size(); }

    Vec frequencies() const {
        Vec w(planes.size());
        for (std::size_t j = 0; j < planes.size(); ++j) w[j] = planes[j].frequency;
        return w;
    }

    /// ||v_ker||, the constant speed contribution of the kernel translation
    double kernel_speed() const { return norm(v_ker); }
};

/// Complex coordinate z_j = <p - c, e_j> + i <p - c, f_j> of a point,
/// returned as (re, im) pairs.
inline std::vector<std::array<double, 2>> plane_coordinates(const CanonicalFrame& frame, const Vec& p) {
    if (p.size() != frame.ambient_dim) throw DimensionMismatch("plane_coordinates: point has wrong dimension");
    const Vec q = sub(p, frame.center);
    std::vector<std::array<double, 2>> z(frame.planes.size());
    for (std::size_t j = 0; j < frame.planes.size(); ++j)
        z[j] = {dot(q, frame.planes[j].e), dot(q, frame.planes[j].f)};
    return z;
}

/// Plane components of a tangent/ambient *vector* (no center shift).
inline std::vector<std::array<double, 2>> plane_components(const CanonicalFrame& frame, const Vec& t) {
    if (t.size() != frame.ambient_dim) throw DimensionMismatch("plane_components: vector has wrong dimension");
    std::vector<std::array<double, 2>> c(frame.planes.size());
    for (std::size_t j = 0; j < frame.planes.size(); ++j)
        c[j] = {dot(t, frame.planes[j].e), dot(t, frame.planes[j].f)};
    return c;
}

/// Kernel-basis coordinates of p - c.
inline Vec kernel_coordinates(const CanonicalFrame& frame, const Vec& p) {
    if (p.size() != frame.ambient_dim) throw DimensionMismatch("kernel_coordinates: point has wrong dimension");
    const Vec q = sub(p, frame.center);
    Vec r(frame.kernel_basis.size());
    for (std::size_t i = 0; i < frame.kernel_basis.size(); ++i) r[i] = dot(q, frame.kernel_basis[i]);
    return r;
}

/// Block-diagonalize the skew part and absorb the rotational component of
/// the translation into an origin shift.
///
/// Frequencies are the positive square roots of the nonzero eigenvalues of
/// -R^2 = R^T R; each 2-dimensional eigenspace contributes one plane. Within
/// a higher-dimensional eigenspace (repeated frequencies) planes are split
/// off pairwise: take the first remaining eigenvector u, partner it with
/// R u / ||R u||, and orthonormalize the rest against the pair. This keeps
/// every extracted plane exactly R-invariant.
inline CanonicalFrame canonicalize(const EuclideanKillingField& field, const ToleranceConfig& tol = {}) {
    tol.validate();
    const Matrix& r = field.skew();
    const std::size_t m = field.dim();

    // Gram of columns: equals -R^2 for skew R and is exactly symmetric as computed
    Matrix s(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) acc += r(k, i) * r(k, j);
            s(i, j) = acc;
            s(j, i) = acc;
        }

    const SymEig eig = sym_eigendecompose(s, tol);
    const double lambda_max = std::max(eig.eigenvalues.front(), 0.0);
    const double cutoff = tol.zero_freq_rel * lambda_max;

    // partition eigenpairs into rotational part and kernel
    std::vector<std::pair<double, Vec>> rotational; // (eigenvalue of -R^2, eigenvector)
    std::vector<Vec> kernel;
    for (std::size_t i = 0; i < m; ++i) {
        const double lambda = eig.eigenvalues[i];
        if (lambda > cutoff && lambda > 0.0)
            rotational.emplace_back(lambda, eig.eigenvectors.col(i));
        else
            kernel.push_back(eig.eigenvectors.col(i));
    }
    if (rotational.size() % 2 != 0) {
        // a rotational eigenvalue always has even multiplicity; an odd count
        // means the cutoff split a borderline eigenspace, so demote the
        // smallest eigenvalue to the kernel
        kernel.push_back(std::move(rotational.back().second));
        rotational.pop_back();
    }

    CanonicalFrame frame;
    frame.ambient_dim = m;

    while (!rotational.empty()) {
        const double lambda = rotational.front().first;
        Vec u = std::move(rotational.front().second);
        rotational.erase(rotational.begin());

        const double omega = std::sqrt(lambda);
        Vec w = r * u;
        const double wn = norm(w);
        if (wn <= 0.0) throw NoConvergence("canonicalize: rotational eigenvector annihilated by R");
        w = scaled(1.0 / wn, w);

        // w replaces one vector of u's eigenspace; drop the most aligned one
        std::size_t drop = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < rotational.size(); ++i) {
            const double align = std::abs(dot(w, rotational[i].second));
            if (align > best) {
                best = align;
                drop = i;
            }
        }
        rotational.erase(rotational.begin() + static_cast<std::ptrdiff_t>(drop));

        // keep the survivors orthonormal to the new plane and to each other
        if (!rotational.empty()) {
            std::vector<Vec> survivors;
            survivors.reserve(rotational.size());
            for (auto& rv : rotational) survivors.push_back(std::move(rv.second));
            survivors = mgs_orthonormalize(std::move(survivors), {u, w});
            if (survivors.size() != rotational.size())
                throw NoConvergence("canonicalize: eigenspace collapsed while splitting planes");
            for (std::size_t i = 0; i < rotational.size(); ++i) rotational[i].second = std::move(survivors[i]);
        }

        frame.planes.push_back(InvariantPlane{omega, std::move(u), std::move(w)});
    }

    frame.kernel_basis = std::move(kernel);

    // center: minimum-norm solution of R c = -v_im, written in plane coordinates
    const Vec& v = field.translation();
    frame.center = Vec(m, 0.0);
    for (const InvariantPlane& plane : frame.planes) {
        const double a = dot(v, plane.e);
        const double b = dot(v, plane.f);
        axpy(-b / plane.frequency, plane.e, frame.center);
        axpy(a / plane.frequency, plane.f, frame.center);
    }

    frame.v_ker.resize(frame.kernel_basis.size());
    for (std::size_t i = 0; i < frame.kernel_basis.size(); ++i)
        frame.v_ker[i] = dot(v, frame.kernel_basis[i]);

    return frame;
}

/// Inverse of canonicalize: R = sum_j w_j (f_j e_j^T - e_j f_j^T),
/// v = -R c + sum_i (v_ker)_i kernel_i.
inline EuclideanKillingField reconstruct(const CanonicalFrame& frame) {
    const std::size_t m = frame.ambient_dim;
    Matrix r(m, m);
    for (const InvariantPlane& plane : frame.planes) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                r(i, j) += plane.frequency * (plane.f[i] * plane.e[j] - plane.e[i] * plane.f[j]);
    }
    Vec v = scaled(-1.0, r * frame.center);
    for (std::size_t i = 0; i < frame.kernel_basis.size(); ++i)
        axpy(frame.v_ker[i], frame.kernel_basis[i], v);
    return EuclideanKillingField(std::move(r), std::move(v));
}

/// Field value straight from the frame: i w_j z_j in every plane plus the
/// kernel translation.
inline Vec evaluate(const CanonicalFrame& frame, const Vec& p) {
    if (p.size() != frame.ambient_dim) throw DimensionMismatch("evaluate: point has wrong dimension");
    const Vec q = sub(p, frame.center);
    Vec x(frame.ambient_dim, 0.0);
    for (const InvariantPlane& plane : frame.planes) {
        const double a = dot(q, plane.e);
        const double b = dot(q, plane.f);
        axpy(-plane.frequency * b, plane.e, x);
        axpy(plane.frequency * a, plane.f, x);
    }
    for (std::size_t i = 0; i < frame.kernel_basis.size(); ++i)
        axpy(frame.v_ker[i], frame.kernel_basis[i], x);
    return x;
}

/// ||X(p)||^2 = sum_j w_j^2 |z_j|^2 + ||v_ker||^2 in centered coordinates.
inline double speed_squared(const CanonicalFrame& frame, const Vec& p) {
    if (p.size() != frame.ambient_dim) throw DimensionMismatch("speed_squared: point has wrong dimension");
    const Vec q = sub(p, frame.center);
    double s = dot(frame.v_ker, frame.v_ker);
    for (const InvariantPlane& plane : frame.planes) {
        const double a = dot(q, plane.e);
        const double b = dot(q, plane.f);
        s += plane.frequency * plane.frequency * (a * a + b * b);
    }
    return s;
}

/// Gradient of p -> ||X(p)||^2: plane components 2 w_j^2 z_j, kernel
/// components zero.
inline Vec speed_gradient(const CanonicalFrame& frame, const Vec& p) {
    if (p.size() != frame.ambient_dim) throw DimensionMismatch("speed_gradient: point has wrong dimension");
    const Vec q = sub(p, frame.center);
    Vec g(frame.ambient_dim, 0.0);
    for (const InvariantPlane& plane : frame.planes) {
        const double w2 = plane.frequency * plane.frequency;
        axpy(2.0 * w2 * dot(q, plane.e), plane.e, g);
        axpy(2.0 * w2 * dot(q, plane.f), plane.f, g);
    }
    return g;
}

} // namespace kvf
