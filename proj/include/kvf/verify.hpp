#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "kvf/geometry.hpp"
#include "kvf/killing.hpp"
#include "kvf/locus.hpp"
#include "kvf/random.hpp"
#include "kvf/rigidity.hpp"

namespace kvf {

/// One named invariant check. `observed` is the worst measured defect and
/// `bound` the value it was compared against; most checks pass when
/// observed <= bound, sign/spread checks document their own direction.
struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double bound = 0.0;
};

struct VerificationReport {
    std::size_t ambient_dim = 0;
    std::vector<CheckResult> checks;

    bool has_locus = false;
    LocusVariant variant = LocusVariant::empty;
    double length = 0.0;
    double radius_squared = 0.0;
    std::size_t intrinsic_dim = 0;
    bool compact = false;
    std::string parity_note;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.passed; });
    }
};

namespace detail {

inline Vec probe_point(const CanonicalFrame& frame, DeterministicRng& rng) {
    Vec p = frame.center;
    const Vec g = rng.gaussian_vec(frame.ambient_dim);
    axpy(2.0, g, p);
    return p;
}

} // namespace detail

/// Field-scoped invariant suite: canonical round trip, frame relations, the
/// speed closed form, tangency of the field to its own level sets, and flow
/// invariance of the speed. When a length is supplied the level set is
/// classified and, where it is non-empty, membership and (in the compact
/// case) curvature rank and the roundness dichotomy are checked on samples.
inline VerificationReport verify_field(const EuclideanKillingField& field,
                                       std::optional<double> length = std::nullopt,
                                       const ToleranceConfig& tol = {},
                                       std::uint64_t seed = 1234) {
    tol.validate();
    const std::size_t m = field.dim();
    VerificationReport report;
    report.ambient_dim = m;

    const CanonicalFrame frame = canonicalize(field, tol);
    const double field_scale =
        std::max({1.0, frobenius_norm(field.skew()), norm(field.translation())});

    {
        const EuclideanKillingField rec = reconstruct(frame);
        double defect = frobenius_norm(field.skew() - rec.skew());
        defect = std::max(defect, norm(sub(field.translation(), rec.translation())));
        report.checks.push_back({"round_trip", defect <= 1e-8 * field_scale, defect, 1e-8 * field_scale});
    }

    {
        // orthonormality of the frame vectors and the defining relations
        // R e = w f, R f = -w e, R kappa = 0
        std::vector<Vec> basis;
        for (const InvariantPlane& plane : frame.planes) {
            basis.push_back(plane.e);
            basis.push_back(plane.f);
        }
        for (const Vec& kappa : frame.kernel_basis) basis.push_back(kappa);

        double defect = 0.0;
        for (std::size_t a = 0; a < basis.size(); ++a)
            for (std::size_t b = a; b < basis.size(); ++b) {
                const double target = (a == b) ? 1.0 : 0.0;
                defect = std::max(defect, std::abs(dot(basis[a], basis[b]) - target));
            }
        for (const InvariantPlane& plane : frame.planes) {
            Vec re = field.skew() * plane.e;
            axpy(-plane.frequency, plane.f, re);
            Vec rf = field.skew() * plane.f;
            axpy(plane.frequency, plane.e, rf);
            defect = std::max({defect, norm(re) / field_scale, norm(rf) / field_scale});
        }
        for (const Vec& kappa : frame.kernel_basis)
            defect = std::max(defect, norm(field.skew() * kappa) / field_scale);
        report.checks.push_back({"frame_relations", defect <= 1e-8, defect, 1e-8});
    }

    {
        DeterministicRng rng(seed);
        double speed_defect = 0.0;
        double tangency = 0.0;
        double flow_defect = 0.0;
        const double times[] = {0.5, 1.0, 2.5, 10.0};
        for (int i = 0; i < 200; ++i) {
            const Vec p = detail::probe_point(frame, rng);
            const Vec x = evaluate(field, p);
            const double s2 = speed_squared(frame, p);
            speed_defect = std::max(speed_defect,
                                    std::abs(dot(x, x) - s2) / std::max(1.0, std::abs(s2)));
            const Vec grad = speed_gradient(frame, p);
            tangency = std::max(tangency, std::abs(dot(grad, x)) /
                                              std::max(1.0, norm(grad) * norm(x)));
            for (double t : times) {
                const double st = speed_squared(frame, flow(frame, p, t));
                flow_defect = std::max(flow_defect,
                                       std::abs(st - s2) / std::max(1.0, std::abs(s2)));
            }
        }
        report.checks.push_back({"speed_formula", speed_defect <= 1e-9, speed_defect, 1e-9});
        report.checks.push_back({"tangency", tangency <= 1e-8, tangency, 1e-8});
        report.checks.push_back({"flow_preserves_speed", flow_defect <= 1e-10, flow_defect, 1e-10});
    }

    if (!length) return report;

    const ConstantLengthLocus locus = classify(frame, *length, tol);
    const CompactnessReport compactness = compactness_report(frame, *length, tol);
    report.has_locus = true;
    report.variant = locus.variant;
    report.length = locus.length;
    report.radius_squared = locus.radius_squared;
    report.intrinsic_dim = locus.intrinsic_dim;
    report.compact = locus.compact;
    report.parity_note = compactness.parity_note;

    if (locus.variant == LocusVariant::empty) return report;

    const double l2 = locus.length * locus.length;
    const double membership_bound = tol.membership_tol * std::max(1.0, l2);
    const std::vector<Vec> points = sample(locus, 32, seed);

    {
        double defect = 0.0;
        for (const Vec& p : points) defect = std::max(defect, contains(locus, p, tol).defect);
        report.checks.push_back(
            {"locus_membership", defect <= membership_bound, defect, membership_bound});
    }

    {
        double defect = 0.0;
        const double times[] = {1.0, 3.7, 10.0};
        for (std::size_t i = 0; i < std::min<std::size_t>(points.size(), 8); ++i)
            for (double t : times)
                defect = std::max(defect, contains(locus, flow(frame, points[i], t), tol).defect);
        report.checks.push_back(
            {"flow_on_locus", defect <= membership_bound, defect, membership_bound});
    }

    if (!locus.compact) return report;

    {
        const std::size_t expected_rank = 2 * frame.plane_count() - 1;
        double rank_defect = 0.0;
        double max_curvature = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < std::min<std::size_t>(points.size(), 8); ++i) {
            const ShapeReport shape = shape_operator(locus, points[i], tol);
            rank_defect = std::max(rank_defect,
                                   std::abs(static_cast<double>(shape.rank) -
                                            static_cast<double>(expected_rank)));
            for (double lambda : shape.principal_curvatures)
                max_curvature = std::max(max_curvature, lambda);
        }
        report.checks.push_back({"shape_rank", rank_defect == 0.0, rank_defect, 0.0});
        // outward orientation: every principal curvature strictly negative
        report.checks.push_back({"curvature_sign", max_curvature < 0.0, max_curvature, 0.0});
    }

    {
        const RoundnessReport roundness = roundness_test(locus, 64, seed, 1e-9, tol);
        double w2_max = 0.0;
        for (const InvariantPlane& plane : frame.planes)
            w2_max = std::max(w2_max, plane.frequency * plane.frequency);
        CheckResult check;
        check.name = "dichotomy";
        check.observed = roundness.axixi_spread;
        if (roundness.is_round) {
            // round sphere: g(A xi, xi) is constant, the sampled spread is noise
            check.bound = 1e-8 * std::max(1.0, w2_max * locus.radius_squared);
            check.passed = check.observed <= check.bound;
        } else {
            // distinct frequencies: the spread must realize a visible fraction
            // of the analytic range (w2_max - w2_min) * r^2
            check.bound = 0.01 * roundness.omega_spread * locus.radius_squared;
            check.passed = check.observed >= check.bound;
        }
        report.checks.push_back(check);
    }

    return report;
}

} // namespace kvf
