#pragma once
#include <stdexcept>
#include <string>

namespace nilgeom {

// Every failure mode of the library is a named exception so callers (and the
// CLI exit-code contract) can distinguish usage errors from failed checks.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define NILGEOM_ERROR(Name) \
  struct Name : Error { \
    explicit Name(const std::string& what) : Error(std::string(#Name) + ": " + what) {} \
  }

NILGEOM_ERROR(ZeroDenominator);
NILGEOM_ERROR(RuleCycle);
NILGEOM_ERROR(EvalDivisionByZero);
NILGEOM_ERROR(UnassignedParameter);
NILGEOM_ERROR(CoframeMismatch);
NILGEOM_ERROR(NonHomogeneous);
NILGEOM_ERROR(ComplexCoframe);
NILGEOM_ERROR(DegreeMismatch);
NILGEOM_ERROR(SingularTransformation);
NILGEOM_ERROR(SingularMap);
NILGEOM_ERROR(DegenerateParameters);
NILGEOM_ERROR(ParseError);
NILGEOM_ERROR(DuplicateGenerator);
NILGEOM_ERROR(UnknownParameter);

#undef NILGEOM_ERROR

}  // namespace nilgeom
