#pragma once

#include <stdexcept>
#include <string>

namespace bicircle {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define BICIRCLE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
  public:                                                             \
    explicit Name(const std::string& what) : Error(what) {}           \
  };

// Malformed user input (files, flags, inconsistent polynomial data).
BICIRCLE_DEFINE_ERROR(InvalidInput)
// Weight is not strictly positive on the sampling grid.
BICIRCLE_DEFINE_ERROR(NotPositive)
// Quadrature failed to reach the requested tolerance within the grid cap.
BICIRCLE_DEFINE_ERROR(NotConverged)
// Moment matrix is numerically singular or indefinite.
BICIRCLE_DEFINE_ERROR(NotPositiveDefinite)
// A moment outside the stored support range was requested.
BICIRCLE_DEFINE_ERROR(SupportExceeded)
// Requested level needs moments beyond the supplied table.
BICIRCLE_DEFINE_ERROR(LevelExceedsMoments)
// A factorization-class condition required by the requested operation fails.
BICIRCLE_DEFINE_ERROR(ConditionViolated)
// Combined kernel ranks exceed the available dimension.
BICIRCLE_DEFINE_ERROR(RankOverflow)
// The invariant-subspace rotation cannot reach the required block form.
BICIRCLE_DEFINE_ERROR(StructureUnattainable)
// A matrix expected to have orthonormal rows fails the check.
BICIRCLE_DEFINE_ERROR(NotIsometry)
// The null space needed for the unitary completion is not one-dimensional.
BICIRCLE_DEFINE_ERROR(NullSpaceDegenerate)
// The independent factor identity cross-check exceeded tolerance.
BICIRCLE_DEFINE_ERROR(CrossCheckFailed)
// A final verification residual exceeded tolerance.
BICIRCLE_DEFINE_ERROR(VerificationFailed)
// The stable-case shortcut was invoked although the mixed kernel is nonzero.
BICIRCLE_DEFINE_ERROR(NotStableCase)
// Univariate stability test received a numerically zero polynomial.
BICIRCLE_DEFINE_ERROR(DegenerateLeadingCoefficient)

#undef BICIRCLE_DEFINE_ERROR

}  // namespace bicircle
