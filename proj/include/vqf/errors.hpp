#pragma once

#include <stdexcept>
#include <string>

namespace vqf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define VQF_DEFINE_ERROR(Name)          \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

VQF_DEFINE_ERROR(ConflictingFix)
VQF_DEFINE_ERROR(MissingVariable)
VQF_DEFINE_ERROR(TooManyVariables)
VQF_DEFINE_ERROR(InfeasibleInstance)
VQF_DEFINE_ERROR(UndecomposableClause)
VQF_DEFINE_ERROR(InvalidPenaltyCoefficients)
VQF_DEFINE_ERROR(EmptyHamiltonian)
VQF_DEFINE_ERROR(DimensionMismatch)
VQF_DEFINE_ERROR(TooManyQubits)
VQF_DEFINE_ERROR(InvalidConfig)
VQF_DEFINE_ERROR(DegenerateBaseline)
VQF_DEFINE_ERROR(NoFeasibleCandidate)

#undef VQF_DEFINE_ERROR

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace vqf
