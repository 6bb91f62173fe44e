#pragma once

#include <stdexcept>
#include <string>

namespace hmmq {

// Input errors are caused by a malformed or inadmissible request; numerical
// errors signal that a computation could not be completed to tolerance.
enum class ErrorKind { Input, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define HMMQ_DEFINE_ERROR(Name, Kind)                               \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what)                          \
        : Error(ErrorKind::Kind, std::string(#Name ": ") + what) {} \
  };

HMMQ_DEFINE_ERROR(SpecFormatError, Input)
HMMQ_DEFINE_ERROR(RowSumError, Input)
HMMQ_DEFINE_ERROR(ReducibilityError, Input)
HMMQ_DEFINE_ERROR(AlphabetError, Input)
HMMQ_DEFINE_ERROR(NotUnifilarError, Input)
HMMQ_DEFINE_ERROR(EncodingError, Input)
HMMQ_DEFINE_ERROR(DomainError, Input)
HMMQ_DEFINE_ERROR(ShapeError, Input)
HMMQ_DEFINE_ERROR(ResourceError, Input)

HMMQ_DEFINE_ERROR(TraceError, Numerical)
HMMQ_DEFINE_ERROR(SpectrumError, Numerical)
HMMQ_DEFINE_ERROR(ConvergenceError, Numerical)
HMMQ_DEFINE_ERROR(ConsistencyError, Numerical)
HMMQ_DEFINE_ERROR(BoundViolationError, Numerical)

#undef HMMQ_DEFINE_ERROR

}  // namespace hmmq
