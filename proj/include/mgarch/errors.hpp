#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mgarch {

enum class ErrorCode {
  InvalidInput,
  NumericalFailure,
  SingularMatrix,
  SingularLyapunov,
  NotPositiveDefinite,
  NonStationary,
  InsufficientData,
  PositivityViolation,
  UnimodularEigenvalues,
  SelectionCountMismatch,
  IllConditionedEigenvectors,
  MissingSigmaW,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the simulator when unvech(h_t) loses positive definiteness.
class PositivityViolation : public Error {
 public:
  PositivityViolation(std::size_t step, const std::string& what)
      : Error(ErrorCode::PositivityViolation, what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Prefixes the message with a pipeline stage name, keeping the code.
[[noreturn]] void rethrow_with_stage(const Error& e, std::string_view stage);

}  // namespace mgarch
