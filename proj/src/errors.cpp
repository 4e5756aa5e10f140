#include "mgarch/errors.hpp"

namespace mgarch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularLyapunov: return "SingularLyapunov";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonStationary: return "NonStationary";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::PositivityViolation: return "PositivityViolation";
    case ErrorCode::UnimodularEigenvalues: return "UnimodularEigenvalues";
    case ErrorCode::SelectionCountMismatch: return "SelectionCountMismatch";
    case ErrorCode::IllConditionedEigenvectors: return "IllConditionedEigenvectors";
    case ErrorCode::MissingSigmaW: return "MissingSigmaW";
  }
  return "Unknown";
}

void rethrow_with_stage(const Error& e, std::string_view stage) {
  std::string msg = std::string(stage) + ": " + e.what();
  if (const auto* pv = dynamic_cast<const PositivityViolation*>(&e)) {
    throw PositivityViolation(pv->step(), msg);
  }
  throw Error(e.code(), msg);
}

}  // namespace mgarch
