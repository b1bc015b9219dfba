#pragma once

#include <cstdint>
#include <cstddef>

#include "kvf/locus.hpp"

namespace kvf {

// ---------------------------------------------------------------------------
// extrinsic geometry of the compact complex ellipsoid (k = 0)
// ---------------------------------------------------------------------------

/// Sign convention: the shape operator is A t = -D_t(unit normal) with the
/// outward normal, which makes every principal curvature of the ellipsoid
/// strictly negative (all of the unit sphere's equal -1). `inward` flips
/// the normal and negates the operator and both form values.
enum class NormalOrientation { outward, inward };

namespace detail {

inline void require_compact(const ConstantLengthLocus& locus, const char* op) {
    if (locus.variant != LocusVariant::ellipsoid_cylinder || locus.kernel_dim != 0)
        throw NonCompactLocus(std::string(op) +
                              ": requires the compact ellipsoid case (EllipsoidCylinder with k = 0)");
}

inline void require_on_locus(const ConstantLengthLocus& locus, const Vec& p,
                             const ToleranceConfig& tol, const char* op) {
    const MembershipResult membership = contains(locus, p, tol);
    if (!membership.member)
        throw PointOffLocus(std::string(op) + ": point is off the locus, membership defect " +
                            std::to_string(membership.defect));
}

/// Unnormalized normal of the ellipsoid at p: plane components w_j^2 z_j.
inline Vec raw_normal_vector(const CanonicalFrame& frame, const Vec& p) {
    const Vec q = sub(p, frame.center);
    Vec n(frame.ambient_dim, 0.0);
    for (const InvariantPlane& plane : frame.planes) {
        const double w2 = plane.frequency * plane.frequency;
        axpy(w2 * dot(q, plane.e), plane.e, n);
        axpy(w2 * dot(q, plane.f), plane.f, n);
    }
    return n;
}

/// The symmetric map W t: plane components scaled by w_j^2 (the derivative
/// of the raw normal field, which is linear in centered coordinates).
inline Vec weighted_plane_map(const CanonicalFrame& frame, const Vec& t) {
    Vec y(frame.ambient_dim, 0.0);
    for (const InvariantPlane& plane : frame.planes) {
        const double w2 = plane.frequency * plane.frequency;
        axpy(w2 * dot(t, plane.e), plane.e, y);
        axpy(w2 * dot(t, plane.f), plane.f, y);
    }
    return y;
}

} // namespace detail

struct SurfaceNormal {
    Vec raw;  ///< plane components w_j^2 z_j (sign per orientation)
    Vec unit; ///< raw / ||raw||
};

inline SurfaceNormal normal(const ConstantLengthLocus& locus, const Vec& p,
                            const ToleranceConfig& tol = {},
                            NormalOrientation orientation = NormalOrientation::outward) {
    tol.validate();
    detail::require_compact(locus, "normal");
    detail::require_on_locus(locus, p, tol, "normal");

    Vec raw = detail::raw_normal_vector(locus.frame, p);
    if (orientation == NormalOrientation::inward) raw = scaled(-1.0, raw);
    const double len = norm(raw);
    if (len <= 0.0) throw PointOffLocus("normal: vanishing normal (point at the center?)");
    SurfaceNormal out;
    out.unit = scaled(1.0 / len, raw);
    out.raw = std::move(raw);
    return out;
}

// ---------------------------------------------------------------------------
// second fundamental form
// ---------------------------------------------------------------------------

struct FormValue {
    double raw = 0.0;  ///< -sum_j w_j^2 |t_j|^2 against the unnormalized normal
    double unit = 0.0; ///< raw / ||n(p)||, the honest II(t, t) with unit normal
};

inline FormValue second_fundamental_form(const ConstantLengthLocus& locus, const Vec& p,
                                         const Vec& t, const ToleranceConfig& tol = {},
                                         NormalOrientation orientation = NormalOrientation::outward) {
    tol.validate();
    detail::require_compact(locus, "second_fundamental_form");
    detail::require_on_locus(locus, p, tol, "second_fundamental_form");
    if (t.size() != locus.frame.ambient_dim)
        throw DimensionMismatch("second_fundamental_form: vector has wrong dimension");

    const Vec n_raw = detail::raw_normal_vector(locus.frame, p);
    const double n_len = norm(n_raw);
    if (std::abs(dot(t, n_raw)) > 1e-9 * norm(t) * n_len)
        throw NonTangentVector("second_fundamental_form: vector is not tangent at p");

    double quad = 0.0;
    for (const InvariantPlane& plane : locus.frame.planes) {
        const double a = dot(t, plane.e);
        const double b = dot(t, plane.f);
        quad += plane.frequency * plane.frequency * (a * a + b * b);
    }
    const double sign = (orientation == NormalOrientation::outward) ? -1.0 : 1.0;
    return {sign * quad, sign * quad / n_len};
}

// ---------------------------------------------------------------------------
// shape operator
// ---------------------------------------------------------------------------

/// Pointwise extrinsic geometry of the ellipsoid. shape_matrix is the
/// operator in the columns of tangent_basis; its quadratic form on a
/// tangent vector reproduces the unit-normal second fundamental form.
struct ShapeReport {
    Vec point;
    Vec normal_raw;
    Vec normal_unit;
    Matrix tangent_basis;      ///< ambient_dim x (2N - 1), orthonormal columns
    Matrix shape_matrix;       ///< (2N - 1) x (2N - 1), symmetric
    Vec principal_curvatures;  ///< eigenvalues of shape_matrix, descending
    std::size_t rank = 0;
    double axixi_paper = 0.0;  ///< sum_j w_j^4 |z_j|^2
    double axixi_unit = 0.0;   ///< II(X, X) with unit normal
};

/// Deterministic orthonormal tangent basis at p: drop the standard basis
/// vector most aligned with the unit normal, Gram-Schmidt the rest.
inline Matrix tangent_basis(const CanonicalFrame& frame, const Vec& unit_normal) {
    const std::size_t m = frame.ambient_dim;
    std::size_t drop = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (std::abs(unit_normal[i]) > std::abs(unit_normal[drop])) drop = i;

    std::vector<Vec> candidates;
    candidates.reserve(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
        if (i == drop) continue;
        Vec e(m, 0.0);
        e[i] = 1.0;
        candidates.push_back(std::move(e));
    }
    const std::vector<Vec> basis = mgs_orthonormalize(std::move(candidates), {unit_normal});
    if (basis.size() != m - 1)
        throw NoConvergence("tangent_basis: Gram-Schmidt lost a direction");

    Matrix t(m, m - 1);
    for (std::size_t j = 0; j < basis.size(); ++j) t.set_col(j, basis[j]);
    return t;
}

inline ShapeReport shape_operator(const ConstantLengthLocus& locus, const Vec& p,
                                  const ToleranceConfig& tol = {},
                                  NormalOrientation orientation = NormalOrientation::outward) {
    tol.validate();
    detail::require_compact(locus, "shape_operator");
    detail::require_on_locus(locus, p, tol, "shape_operator");

    const CanonicalFrame& frame = locus.frame;
    const std::size_t m = frame.ambient_dim;

    ShapeReport report;
    report.point = p;
    const SurfaceNormal nrm = normal(locus, p, tol, orientation);
    report.normal_raw = nrm.raw;
    report.normal_unit = nrm.unit;
    const double n_len = norm(nrm.raw);

    report.tangent_basis = tangent_basis(frame, nrm.unit);
    const std::size_t dim = m - 1;

    // A_ab = -<W t_a, t_b> / ||n||; the normal-parallel part of D_t(unit
    // normal) drops out under the tangential projection
    const double sign = (orientation == NormalOrientation::outward) ? -1.0 : 1.0;
    report.shape_matrix = Matrix(dim, dim);
    std::vector<Vec> wt(dim);
    for (std::size_t a = 0; a < dim; ++a)
        wt[a] = detail::weighted_plane_map(frame, report.tangent_basis.col(a));
    for (std::size_t a = 0; a < dim; ++a) {
        const Vec ta = report.tangent_basis.col(a);
        for (std::size_t b = a; b < dim; ++b) {
            const double value = sign * dot(wt[b], ta) / n_len;
            report.shape_matrix(a, b) = value;
            report.shape_matrix(b, a) = value;
        }
    }

    const SymEig eig = sym_eigendecompose(report.shape_matrix, tol);
    report.principal_curvatures = eig.eigenvalues;
    double max_abs = 0.0;
    for (double lambda : eig.eigenvalues) max_abs = std::max(max_abs, std::abs(lambda));
    for (double lambda : eig.eigenvalues)
        if (std::abs(lambda) > tol.rank_tol * max_abs && max_abs > 0.0) ++report.rank;

    const auto z = plane_coordinates(frame, p);
    double paper = 0.0;
    for (std::size_t j = 0; j < frame.plane_count(); ++j) {
        const double w2 = frame.planes[j].frequency * frame.planes[j].frequency;
        paper += w2 * w2 * (z[j][0] * z[j][0] + z[j][1] * z[j][1]);
    }
    report.axixi_paper = paper;
    report.axixi_unit = sign * paper / n_len;
    return report;
}

// ---------------------------------------------------------------------------
// g(A xi, xi) and the sphere dichotomy
// ---------------------------------------------------------------------------

struct AxiXi {
    double paper = 0.0; ///< sum_j w_j^4 |z_j|^2, constant iff all w_j^2 equal
    double unit = 0.0;  ///< II(X, X) with unit normal
};

inline AxiXi axixi(const ConstantLengthLocus& locus, const Vec& p,
                   const ToleranceConfig& tol = {},
                   NormalOrientation orientation = NormalOrientation::outward) {
    tol.validate();
    detail::require_compact(locus, "axixi");
    detail::require_on_locus(locus, p, tol, "axixi");

    const CanonicalFrame& frame = locus.frame;
    const auto z = plane_coordinates(frame, p);
    double paper = 0.0;
    for (std::size_t j = 0; j < frame.plane_count(); ++j) {
        const double w2 = frame.planes[j].frequency * frame.planes[j].frequency;
        paper += w2 * w2 * (z[j][0] * z[j][0] + z[j][1] * z[j][1]);
    }
    const double n_len = norm(detail::raw_normal_vector(frame, p));
    const double sign = (orientation == NormalOrientation::outward) ? -1.0 : 1.0;
    return {paper, sign * paper / n_len};
}

struct RoundnessReport {
    bool is_round = false;
    double omega_spread = 0.0;   ///< max_j w_j^2 - min_j w_j^2
    double axixi_spread = 0.0;   ///< max - min of axixi_paper over the samples
    double sphere_radius = 0.0;  ///< r / w when round, else 0
    std::size_t sample_count = 0;
};

/// The locus is a round sphere exactly when all frequencies agree, which is
/// exactly when the raw form of g(A xi, xi) is constant on it. Roundness
/// is decided from the frequencies; the sampled spread of axixi_paper is
/// reported as the empirical side of that equivalence.
inline RoundnessReport roundness_test(const ConstantLengthLocus& locus, std::size_t n_samples,
                                      std::uint64_t seed, double roundness_tol = 1e-9,
                                      const ToleranceConfig& tol = {}) {
    tol.validate();
    detail::require_compact(locus, "roundness_test");

    const CanonicalFrame& frame = locus.frame;
    double w2_min = std::numeric_limits<double>::infinity();
    double w2_max = 0.0;
    for (const InvariantPlane& plane : frame.planes) {
        const double w2 = plane.frequency * plane.frequency;
        w2_min = std::min(w2_min, w2);
        w2_max = std::max(w2_max, w2);
    }

    RoundnessReport report;
    report.omega_spread = w2_max - w2_min;
    report.is_round = (report.omega_spread <= roundness_tol * w2_max);
    if (report.is_round)
        report.sphere_radius = std::sqrt(locus.radius_squared) / frame.planes.front().frequency;

    const std::vector<Vec> points = sample(locus, n_samples, seed);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Vec& p : points) {
        const double value = axixi(locus, p, tol).paper;
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    report.axixi_spread = (n_samples > 0) ? hi - lo : 0.0;
    report.sample_count = n_samples;
    return report;
}

} // namespace kvf
