#pragma once

#include <stdexcept>
#include <string>

namespace fdde {

/// Base for every error raised by the library. `kind()` is the stable name
/// used in CLI diagnostics.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept = 0;
};

#define FDDE_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(what) {}         \
    const char* kind() const noexcept override { return #Name; }    \
  }

// Argument outside the mathematical domain of an operation.
FDDE_DEFINE_ERROR(DomainError);
// (a, b) lies on one of the measure-zero boundaries of the linear classifier.
FDDE_DEFINE_ERROR(BoundaryError);
// Invalid solver grid, sweep range, or lattice.
FDDE_DEFINE_ERROR(ConfigError);
// A theorem predicate disagrees with the general classifier.
FDDE_DEFINE_ERROR(ConsistencyError);
// The characteristic-equation scan found no imaginary-axis crossing.
FDDE_DEFINE_ERROR(NoCrossingError);
FDDE_DEFINE_ERROR(SeriesTooShort);
FDDE_DEFINE_ERROR(DegenerateSeries);
// Model parameters violate their invariants.
FDDE_DEFINE_ERROR(ValidationError);
// Malformed command line: unknown flag, missing required flag, bad syntax.
FDDE_DEFINE_ERROR(UsageError);

#undef FDDE_DEFINE_ERROR

}  // namespace fdde
