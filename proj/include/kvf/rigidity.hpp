#pragma once

#include <cmath>
#include <cstddef>

#include "kvf/locus.hpp"

namespace kvf {

// ---------------------------------------------------------------------------
// flow of a Killing field
// ---------------------------------------------------------------------------

/// The time-t isometry generated by the field: each invariant plane rotates
/// by angle w_j t around the center, kernel coordinates translate by
/// t * v_ker. A one-parameter group: psi_0 = id, psi_{s+t} = psi_s o psi_t,
/// and d/dt psi_t(p)|_0 = X(p).
inline Vec flow(const CanonicalFrame& frame, const Vec& p, double t) {
    if (p.size() != frame.ambient_dim) throw DimensionMismatch("flow: point has wrong dimension");
    const Vec q = sub(p, frame.center);
    Vec out = frame.center;
    for (const InvariantPlane& plane : frame.planes) {
        const double a = dot(q, plane.e);
        const double b = dot(q, plane.f);
        const double c = std::cos(plane.frequency * t);
        const double s = std::sin(plane.frequency * t);
        axpy(c * a - s * b, plane.e, out);
        axpy(s * a + c * b, plane.f, out);
    }
    for (std::size_t i = 0; i < frame.kernel_basis.size(); ++i)
        axpy(dot(q, frame.kernel_basis[i]) + t * frame.v_ker[i], frame.kernel_basis[i], out);
    return out;
}

// ---------------------------------------------------------------------------
// recovering an ambient Killing field from samples
// ---------------------------------------------------------------------------

/// A candidate Killing field sampled on a hypersurface: vectors[i] is the
/// field value at points[i]. Weights are optional (empty means uniform).
struct FieldSampleSet {
    std::vector<Vec> points;
    std::vector<Vec> vectors;
    Vec weights;

    std::size_t size() const { return points.size(); }

    void validate() const {
        if (points.empty()) throw EmptySampleSet("FieldSampleSet: no samples");
        if (vectors.size() != points.size())
            throw DimensionMismatch("FieldSampleSet: point and vector counts differ");
        if (!weights.empty() && weights.size() != points.size())
            throw DimensionMismatch("FieldSampleSet: weight count differs from sample count");
        const std::size_t m = points.front().size();
        if (m == 0) throw DimensionMismatch("FieldSampleSet: zero-dimensional samples");
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i].size() != m || vectors[i].size() != m)
                throw DimensionMismatch("FieldSampleSet: inconsistent sample dimensions");
            if (!all_finite(points[i]) || !all_finite(vectors[i]))
                throw Error("FieldSampleSet: non-finite sample entries");
        }
        for (double w : weights)
            if (!(w > 0.0)) throw Error("FieldSampleSet: weights must be strictly positive");
    }

    double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
};

/// Index of entry (a, c), a < c, in the row-major strict upper triangle.
inline std::size_t skew_param_index(std::size_t a, std::size_t c, std::size_t m) {
    return a * m - a * (a + 1) / 2 + (c - a - 1);
}

/// The fitted parameters in solve order: strict upper triangle of R
/// (row-major), then v.
inline Vec killing_parameters(const EuclideanKillingField& field) {
    const std::size_t m = field.dim();
    Vec theta(m * (m - 1) / 2 + m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = a + 1; c < m; ++c)
            theta[skew_param_index(a, c, m)] = field.skew()(a, c);
    for (std::size_t a = 0; a < m; ++a) theta[m * (m - 1) / 2 + a] = field.translation()[a];
    return theta;
}

struct KillingFit {
    EuclideanKillingField field;
    double residual_rms = 0.0;  ///< sqrt(sum_i w_i ||R p_i + v - xi_i||^2 / sum_i w_i)
    std::size_t nullity = 0;    ///< non-uniqueness of the extension
};

/// Least-squares extension of sampled tangent data to an ambient Killing
/// field: minimize sum_i w_i ||R p_i + v - xi_i||^2 over skew R and v.
/// Unknowns are the strict upper triangle of R (row-major) followed by v,
/// assembled into one linear system. A positive nullity flags samples that
/// do not determine the field (for example points confined to a proper
/// affine subspace).
inline KillingFit fit_ambient_killing(const FieldSampleSet& samples, const ToleranceConfig& tol = {}) {
    tol.validate();
    samples.validate();

    const std::size_t m = samples.points.front().size();
    const std::size_t n_skew = m * (m - 1) / 2;
    const std::size_t n_unknowns = n_skew + m;
    const std::size_t n_rows = m * samples.size();

    Matrix a(n_rows, n_unknowns);
    Vec b(n_rows, 0.0);
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Vec& p = samples.points[i];
        const double sw = std::sqrt(samples.weight(i));
        weight_sum += samples.weight(i);
        for (std::size_t row_c = 0; row_c < m; ++row_c) {
            const std::size_t row = i * m + row_c;
            // R_{row_c, c} = +x_{idx(row_c, c)} above the diagonal,
            //                -x_{idx(c, row_c)} below it
            for (std::size_t c = row_c + 1; c < m; ++c)
                a(row, skew_param_index(row_c, c, m)) = sw * p[c];
            for (std::size_t c = 0; c < row_c; ++c)
                a(row, skew_param_index(c, row_c, m)) = -sw * p[c];
            a(row, n_skew + row_c) = sw;
            b[row] = sw * samples.vectors[i][row_c];
        }
    }

    const LeastSquaresSolution solution = solve_least_squares(a, b, tol);

    Matrix r(m, m);
    for (std::size_t row_c = 0; row_c < m; ++row_c)
        for (std::size_t c = row_c + 1; c < m; ++c) {
            r(row_c, c) = solution.x[skew_param_index(row_c, c, m)];
            r(c, row_c) = -r(row_c, c);
        }
    Vec v(solution.x.begin() + static_cast<std::ptrdiff_t>(n_skew), solution.x.end());

    return KillingFit{EuclideanKillingField(std::move(r), std::move(v)),
                      solution.residual_norm / std::sqrt(weight_sum), solution.nullity};
}

// ---------------------------------------------------------------------------
// extension certificate
// ---------------------------------------------------------------------------

/// Data-level certificate that the sampled hypersurface sits inside the
/// constant-length locus of the fitted field: the sampled speeds match the
/// expected length and every sample point satisfies the locus equation.
struct ExtendabilityReport {
    KillingFit fit;
    double expected_length = 0.0;
    double max_speed_deviation = 0.0;   ///< max_i | ||xi_i|| - L |
    double max_membership_defect = 0.0; ///< max_i membership defect of p_i
    LocusVariant variant = LocusVariant::empty;
    bool locus_consistency = false;
};

inline ExtendabilityReport extendability_report(const FieldSampleSet& samples, double expected_length,
                                                const ToleranceConfig& tol = {}) {
    tol.validate();
    samples.validate();
    if (!(expected_length > 0.0))
        throw NonPositiveLength("extendability_report: expected length must be > 0");

    ExtendabilityReport report{fit_ambient_killing(samples, tol)};
    report.expected_length = expected_length;

    for (const Vec& xi : samples.vectors)
        report.max_speed_deviation =
            std::max(report.max_speed_deviation, std::abs(norm(xi) - expected_length));

    const CanonicalFrame frame = canonicalize(report.fit.field, tol);
    const ConstantLengthLocus locus = classify(frame, expected_length, tol);
    report.variant = locus.variant;
    for (const Vec& p : samples.points)
        report.max_membership_defect =
            std::max(report.max_membership_defect, contains(locus, p, tol).defect);

    const double l2 = expected_length * expected_length;
    report.locus_consistency =
        report.max_speed_deviation <= tol.membership_tol * std::max(1.0, expected_length) &&
        report.max_membership_defect <= tol.membership_tol * std::max(1.0, l2);
    return report;
}

/// Local-to-global consistency probe: fit on the even-indexed and
/// odd-indexed halves separately and measure the relative deviation of the
/// two parameter vectors. Exact Killing data yields (up to conditioning)
/// identical fits; the caller picks the threshold.
inline double split_fit_deviation(const FieldSampleSet& samples, const ToleranceConfig& tol = {}) {
    samples.validate();
    if (samples.size() < 2)
        throw EmptySampleSet("split_fit_deviation: need at least two samples");

    FieldSampleSet even;
    FieldSampleSet odd;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        FieldSampleSet& half = (i % 2 == 0) ? even : odd;
        half.points.push_back(samples.points[i]);
        half.vectors.push_back(samples.vectors[i]);
        if (!samples.weights.empty()) half.weights.push_back(samples.weights[i]);
    }

    const Vec theta_even = killing_parameters(fit_ambient_killing(even, tol).field);
    const Vec theta_odd = killing_parameters(fit_ambient_killing(odd, tol).field);
    const double scale = std::max({1e-30, norm(theta_even), norm(theta_odd)});
    return norm(sub(theta_even, theta_odd)) / scale;
}

} // namespace kvf
