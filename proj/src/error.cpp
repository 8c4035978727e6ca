#include "bgjt/error.hpp"

namespace bgjt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::RegimeViolation: return "RegimeViolation";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::BadFactorization: return "BadFactorization";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::BothZero: return "BothZero";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::LinearTrapPresent: return "LinearTrapPresent";
    case ErrorKind::InsufficientRelations: return "InsufficientRelations";
    case ErrorKind::GeneratorNotInSubfield: return "GeneratorNotInSubfield";
    case ErrorKind::NotCyclicAfterCorrection: return "NotCyclicAfterCorrection";
    case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorKind::RandomizationExhausted: return "RandomizationExhausted";
    case ErrorKind::DescentStuck: return "DescentStuck";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::ScaleTooLarge: return "ScaleTooLarge";
    case ErrorKind::NoLinearTrapFound: return "NoLinearTrapFound";
    case ErrorKind::CertificateMismatch: return "CertificateMismatch";
    case ErrorKind::StaleCache: return "StaleCache";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace bgjt
