#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bgjt {

enum class ErrorKind {
  NotPrime,
  RegimeViolation,
  ZeroElement,
  BadFactorization,
  ZeroPolynomial,
  BothZero,
  SearchExhausted,
  LinearTrapPresent,
  InsufficientRelations,
  GeneratorNotInSubfield,
  NotCyclicAfterCorrection,
  DegreeOutOfRange,
  RandomizationExhausted,
  DescentStuck,
  VerificationFailed,
  NotFound,
  ScaleTooLarge,
  NoLinearTrapFound,
  CertificateMismatch,
  StaleCache,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind` is stable and
// is what the CLI writes into its error JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bgjt
