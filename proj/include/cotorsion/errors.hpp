#pragma once

#include <stdexcept>
#include <string>

namespace cotorsion {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ParentMismatch : public Error {
 public:
  ParentMismatch() : Error("objects belong to different algebras") {}
  using Error::Error;
};

class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// Raised when an enumeration would visit more candidates than allowed.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A stated hypothesis (closure property, class inclusion, ...) failed on
/// the sampled objects.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Operation called on inputs violating its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class OutsideSubcategory : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Something that the theory guarantees did not happen (e.g. no lift found
/// for a cofibration against an acyclic fibration).
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace cotorsion
