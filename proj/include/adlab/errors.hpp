#pragma once

#include <stdexcept>
#include <string>

namespace adlab {

// Config errors are bad inputs (CLI exit 2); numerical errors are failures of a
// computation on valid inputs (CLI exit 3).
enum class ErrorKind { Config, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define ADLAB_DEFINE_ERROR(Name, Kind)                                    \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

ADLAB_DEFINE_ERROR(InvalidArgument, Config)

// numkernel
ADLAB_DEFINE_ERROR(NonHermitianInput, Config)
ADLAB_DEFINE_ERROR(DimensionCap, Config)
ADLAB_DEFINE_ERROR(StepTooLarge, Numerical)
ADLAB_DEFINE_ERROR(NoConvergence, Numerical)

// models
ADLAB_DEFINE_ERROR(OddSize, Config)
ADLAB_DEFINE_ERROR(SizeCap, Config)
ADLAB_DEFINE_ERROR(AtCriticalPoint, Config)
ADLAB_DEFINE_ERROR(DegenerateGroundState, Numerical)

// quench_lab
ADLAB_DEFINE_ERROR(BaseNegative, Numerical)
ADLAB_DEFINE_ERROR(NotBracketed, Numerical)

// scaling
ADLAB_DEFINE_ERROR(TooFewSamples, Config)
ADLAB_DEFINE_ERROR(NonPositive, Config)

#undef ADLAB_DEFINE_ERROR

}  // namespace adlab
