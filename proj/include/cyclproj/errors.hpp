#pragma once

#include <stdexcept>
#include <string>

namespace cyclproj {

/// Invalid point, parameter or space description.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Comparison angle requested at a vertex with a zero-length adjacent side.
class UndefinedAngle : public DomainError {
public:
  using DomainError::DomainError;
};

/// A projector was asked to handle a set shape it has no exact formula for.
class UnsupportedShape : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Two candidate closest points at (numerically) equal distance.
class AmbiguousProjection : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Root bracketing or iteration budget exhausted.
class NumericalFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An operation was called on data it is not defined for (e.g. k != 2 diagnostics).
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cyclproj
