#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "kvf/killing.hpp"
#include "kvf/random.hpp"

namespace kvf {

// ---------------------------------------------------------------------------
// classification of the constant-length set H_X^L
// ---------------------------------------------------------------------------

enum class LocusVariant { empty, affine, ellipsoid_cylinder };

inline const char* to_string(LocusVariant v) {
    switch (v) {
        case LocusVariant::empty: return "Empty";
        case LocusVariant::affine: return "Affine";
        case LocusVariant::ellipsoid_cylinder: return "EllipsoidCylinder";
    }
    return "?";
}

/// The set of points where the field has speed exactly L. In centered
/// canonical coordinates it is one of: empty; the affine subspace
/// {z = 0} x R^k (when L equals the kernel speed); or the cylinder
/// E x R^k over the complex ellipsoid sum_j w_j^2 |z_j|^2 = r^2 with
/// r^2 = L^2 - ||v_ker||^2. The cylinder is compact exactly when k = 0.
struct ConstantLengthLocus {
    LocusVariant variant = LocusVariant::empty;
    CanonicalFrame frame;
    double length = 0.0;         ///< prescribed speed L > 0
    double radius_squared = 0.0; ///< L^2 - ||v_ker||^2, ellipsoid cylinder only
    std::size_t kernel_dim = 0;
    bool compact = false;
    std::size_t intrinsic_dim = 0; ///< manifold dimension (0 for the empty variant)
};

inline ConstantLengthLocus classify(const CanonicalFrame& frame, double length,
                                    const ToleranceConfig& tol = {}) {
    tol.validate();
    if (!(length > 0.0)) throw NonPositiveLength("classify: length must be > 0");

    const double vk = frame.kernel_speed();
    const std::size_t n_planes = frame.plane_count();
    const std::size_t k = frame.kernel_dim();

    ConstantLengthLocus locus;
    locus.frame = frame;
    locus.length = length;
    locus.kernel_dim = k;

    // equality L = ||v_ker|| decided inside a tolerance band
    if (std::abs(length - vk) <= tol.membership_tol * std::max(1.0, length)) {
        locus.variant = LocusVariant::affine;
        locus.intrinsic_dim = k;
    } else if (length < vk || n_planes == 0) {
        // below the kernel speed the field is always faster than L; with no
        // rotational part the speed is constant and never reaches L
        locus.variant = LocusVariant::empty;
    } else {
        locus.variant = LocusVariant::ellipsoid_cylinder;
        locus.radius_squared = length * length - vk * vk;
        locus.compact = (k == 0);
        locus.intrinsic_dim = 2 * n_planes - 1 + k;
    }
    return locus;
}

// ---------------------------------------------------------------------------
// membership
// ---------------------------------------------------------------------------

struct MembershipResult {
    bool member = false;
    double defect = std::numeric_limits<double>::infinity(); ///< |speed^2 - L^2|
};

inline MembershipResult contains(const ConstantLengthLocus& locus, const Vec& p,
                                 const ToleranceConfig& tol = {}) {
    tol.validate();
    if (locus.variant == LocusVariant::empty) return {};
    const double l2 = locus.length * locus.length;
    const double defect = std::abs(speed_squared(locus.frame, p) - l2);
    return {defect <= tol.membership_tol * std::max(1.0, l2), defect};
}

// ---------------------------------------------------------------------------
// sampling
// ---------------------------------------------------------------------------

/// Deterministic points on the locus. The ellipsoid factor comes from a
/// uniform direction u on the unit sphere of R^{2N} via z_j = (r/w_j) u_j,
/// which satisfies the defining equation up to roundoff; kernel coordinates
/// are uniform in [-kernel_box, kernel_box]^k.
inline std::vector<Vec> sample(const ConstantLengthLocus& locus, std::size_t count,
                               std::uint64_t seed, double kernel_box = 1.0) {
    if (locus.variant == LocusVariant::empty)
        throw EmptyLocus("sample: the locus is empty");
    if (!(kernel_box > 0.0)) throw Error("sample: kernel_box must be > 0");

    const CanonicalFrame& frame = locus.frame;
    const std::size_t n_planes = frame.plane_count();
    const double r = std::sqrt(std::max(locus.radius_squared, 0.0));

    DeterministicRng rng(seed);
    std::vector<Vec> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vec p = frame.center;
        if (locus.variant == LocusVariant::ellipsoid_cylinder) {
            const Vec u = rng.unit_sphere(2 * n_planes);
            for (std::size_t j = 0; j < n_planes; ++j) {
                const double scale = r / frame.planes[j].frequency;
                axpy(scale * u[2 * j], frame.planes[j].e, p);
                axpy(scale * u[2 * j + 1], frame.planes[j].f, p);
            }
        }
        for (const Vec& kappa : frame.kernel_basis)
            axpy(rng.uniform(-kernel_box, kernel_box), kappa, p);
        points.push_back(std::move(p));
    }
    return points;
}

// ---------------------------------------------------------------------------
// tangency
// ---------------------------------------------------------------------------

/// <grad ||X||^2, X> at p. The flow of X preserves ||X||, so this vanishes
/// identically, not only on the locus; the returned value is the numerical
/// defect of that identity.
inline double tangency_defect(const CanonicalFrame& frame, const Vec& p) {
    return dot(speed_gradient(frame, p), evaluate(frame, p));
}

// ---------------------------------------------------------------------------
// compactness and the dimension-3 corollary
// ---------------------------------------------------------------------------

struct CompactnessReport {
    bool compact = false;
    LocusVariant variant = LocusVariant::empty;
    std::size_t ambient_dim = 0;
    std::size_t plane_count = 0;
    std::size_t kernel_dim = 0;
    std::size_t locus_dim = 0;
    bool surface_case = false; ///< ambient dimension 3
    std::string parity_note;
};

inline CompactnessReport compactness_report(const CanonicalFrame& frame, double length,
                                            const ToleranceConfig& tol = {}) {
    const ConstantLengthLocus locus = classify(frame, length, tol);
    CompactnessReport report;
    report.compact = locus.compact;
    report.variant = locus.variant;
    report.ambient_dim = frame.ambient_dim;
    report.plane_count = frame.plane_count();
    report.kernel_dim = frame.kernel_dim();
    report.locus_dim = locus.intrinsic_dim;
    report.surface_case = (frame.ambient_dim == 3);

    const std::string m_str = std::to_string(frame.ambient_dim);
    if (report.compact) {
        report.parity_note = "compact locus of odd dimension " +
                             std::to_string(locus.intrinsic_dim) + " in even ambient dimension " +
                             m_str + " = 2N";
    } else {
        report.parity_note = "not compact; a compact constant-length locus requires k = 0 and N >= 1, "
                             "hence even ambient dimension m = 2N (here N = " +
                             std::to_string(report.plane_count) + ", k = " +
                             std::to_string(report.kernel_dim) + ")";
    }
    if (report.surface_case) {
        report.parity_note += "; no compact example exists in R^3: it would need m = 2N, "
                              "impossible for m = 3";
    }
    return report;
}

} // namespace kvf
