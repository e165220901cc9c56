#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrl {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// The model (or method) does not provide the requested capability,
/// e.g. analytic hazard derivatives for a family that lacks them.
/// Distinct from DomainError so callers can fall back to another method.
class CapabilityError : public std::runtime_error {
  public:
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerically valid request that cannot be evaluated in double
/// precision (survival underflow, scaled-survival overflow, ...).
class EvaluationError : public std::runtime_error {
  public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// A closed form left its numerically stable range; the caller should
/// switch to a recurrence or quadrature path.
class StabilityError : public std::runtime_error {
  public:
    explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive integration failed to meet the tolerance within its
/// evaluation budget. Carries the best estimate obtained so far.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double best_value, double best_err)
        : std::runtime_error(what), best_value_(best_value), best_err_(best_err) {}

    double best_value() const noexcept { return best_value_; }
    double best_err() const noexcept { return best_err_; }

  private:
    double best_value_;
    double best_err_;
};

/// Model-spec text rejected by the parser; carries the byte offset of
/// the offending token.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& reason, std::size_t position)
        : std::runtime_error(reason + " (at position " + std::to_string(position) + ")"),
          position_(position),
          reason_(reason) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& reason() const noexcept { return reason_; }

  private:
    std::size_t position_;
    std::string reason_;
};

}  // namespace mrl
