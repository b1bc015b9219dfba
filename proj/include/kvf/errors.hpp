#pragma once

#include <stdexcept>
#include <string>

namespace kvf {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct InvalidTolerance : Error { using Error::Error; };

// linear algebra
struct NonSymmetricInput : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

// Killing fields
struct NonSkewSymmetricInput : Error { using Error::Error; };

// constant-length loci
struct NonPositiveLength : Error { using Error::Error; };
struct EmptyLocus : Error { using Error::Error; };

// ellipsoid geometry
struct PointOffLocus : Error { using Error::Error; };
struct NonCompactLocus : Error { using Error::Error; };
struct NonTangentVector : Error { using Error::Error; };

// rigidity fits
struct EmptySampleSet : Error { using Error::Error; };

// serialized input
struct ParseError : Error { using Error::Error; };

} // namespace kvf
