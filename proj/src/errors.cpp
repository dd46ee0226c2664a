#include "qot/errors.hpp"

namespace qot {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::Unbounded: return "UnboundedError";
    case ErrorCode::InvalidMarginal: return "InvalidMarginal";
    case ErrorCode::UnknownCost: return "UnknownCost";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NonFiniteCost: return "NonFiniteCost";
    case ErrorCode::DegenerateMarginal: return "DegenerateMarginal";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::InfeasibleInit: return "InfeasibleInit";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NotSubmodular: return "NotSubmodular";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Io: return "IoError";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qot
