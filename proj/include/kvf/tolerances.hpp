#pragma once

#include "kvf/errors.hpp"

namespace kvf {

/// Every numerical threshold used by the library, in one place.
/// Thresholds are relative to the input scale wherever a scale exists
/// (replacing R by cR scales all frequencies by c, so absolute cutoffs
/// would not be covariant).
struct ToleranceConfig {
    /// Eigenvalues of -R^2 below this fraction of the largest are kernel.
    double zero_freq_rel = 1e-10;
    /// Absolute tolerance on the locus membership defect |speed^2 - L^2|.
    double membership_tol = 1e-9;
    /// Off-diagonal Frobenius threshold of the symmetric eigensolver,
    /// relative to the Frobenius norm of the input.
    double eig_convergence = 1e-13;
    /// Step for finite-difference cross-checks of the geometry.
    double fd_step = 1e-5;
    /// Singular-value cutoff relative to the largest singular value.
    double rank_tol = 1e-8;

    void validate() const {
        if (!(zero_freq_rel > 0.0) || !(membership_tol > 0.0) ||
            !(eig_convergence > 0.0) || !(fd_step > 0.0) || !(rank_tol > 0.0)) {
            throw InvalidTolerance("tolerance fields must be strictly positive");
        }
        if (!(zero_freq_rel < 1.0)) {
            throw InvalidTolerance("zero_freq_rel must be < 1");
        }
        if (!(rank_tol < 1.0)) {
            throw InvalidTolerance("rank_tol must be < 1");
        }
    }
};

} // namespace kvf
