#pragma once

#include <stdexcept>
#include <string>

namespace odekit {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ODEKIT_DECLARE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    explicit Name(const std::string& what)  \
        : Error(std::string(#Name ": ") + what) {} \
  }

ODEKIT_DECLARE_ERROR(InvalidArgumentError);
ODEKIT_DECLARE_ERROR(DivergenceError);
ODEKIT_DECLARE_ERROR(SampleCapError);
ODEKIT_DECLARE_ERROR(MissingExactError);
ODEKIT_DECLARE_ERROR(NonFiniteError);
ODEKIT_DECLARE_ERROR(ImplicitSolveError);
ODEKIT_DECLARE_ERROR(MissingDerivativeError);
ODEKIT_DECLARE_ERROR(TableauInvariantError);
ODEKIT_DECLARE_ERROR(SingularMatrixError);
ODEKIT_DECLARE_ERROR(NotSymmetricError);
ODEKIT_DECLARE_ERROR(NonConvergenceError);
ODEKIT_DECLARE_ERROR(DefectiveMatrixError);
ODEKIT_DECLARE_ERROR(UnsupportedOrderError);
ODEKIT_DECLARE_ERROR(UnsupportedSpectrumError);
ODEKIT_DECLARE_ERROR(StepUnderflowError);
ODEKIT_DECLARE_ERROR(RejectCapError);
ODEKIT_DECLARE_ERROR(UnknownProblemError);
ODEKIT_DECLARE_ERROR(BadParamError);

#undef ODEKIT_DECLARE_ERROR

}  // namespace odekit
