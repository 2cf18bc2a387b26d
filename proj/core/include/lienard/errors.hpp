#pragma once

#include <stdexcept>
#include <string>

namespace lienard {

/// Coarse failure class; the CLI maps it onto its exit-code taxonomy.
enum class ErrorCategory { input, numerics, obstruction };

/// Base of every exception thrown by the library. `kind()` is a stable
/// machine-readable tag (e.g. "NoCrossing") used in error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, ErrorCategory category, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)), category_(category) {}

  const std::string& kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_; }

 private:
  std::string kind_;
  ErrorCategory category_;
};

#define LIENARD_DEFINE_ERROR(Name, Category)                 \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& message)                \
        : Error(#Name, ErrorCategory::Category, message) {}  \
  };

// input problems
LIENARD_DEFINE_ERROR(ParseError, input)
LIENARD_DEFINE_ERROR(ValidationFailure, input)
LIENARD_DEFINE_ERROR(NotEven, input)
LIENARD_DEFINE_ERROR(ResourceCapExceeded, input)

// numerical failures
LIENARD_DEFINE_ERROR(StepFailure, numerics)
LIENARD_DEFINE_ERROR(NoCrossing, numerics)
LIENARD_DEFINE_ERROR(Escape, numerics)
LIENARD_DEFINE_ERROR(SuspectedNonHyperbolic, numerics)
LIENARD_DEFINE_ERROR(CrossCheckFailure, numerics)
LIENARD_DEFINE_ERROR(NoConvergence, numerics)
LIENARD_DEFINE_ERROR(MatchFailure, numerics)
LIENARD_DEFINE_ERROR(SeparationFailure, numerics)
LIENARD_DEFINE_ERROR(CenterViolation, numerics)

#undef LIENARD_DEFINE_ERROR

/// Thrown when the partial sums of a solution integral grow linearly, which
/// is how a violated obstruction functional shows up numerically.
class ObstructionDivergence : public Error {
 public:
  ObstructionDivergence(const std::string& message, double slope)
      : Error("ObstructionDivergence", ErrorCategory::obstruction, message), slope_(slope) {}

  /// Fitted growth rate of the partial sums per unit time.
  double slope() const noexcept { return slope_; }

 private:
  double slope_;
};

}  // namespace lienard
