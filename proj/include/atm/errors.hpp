#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atm {

/// Argument outside the mathematical domain of an operation (p < 1, l >= R, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dimension or sample-count mismatch.
class ShapeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A right-hand side evaluation produced a non-finite value inside a step.
///
/// For the approximate Taylor stepper `level`/`offset` name the sample
/// f(T^level(offset*h)); for a Runge-Kutta step `stage` is the 1-based stage.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, int level, int offset, std::size_t stage = 0)
      : std::runtime_error(what), level_(level), offset_(offset), stage_(stage) {}

  int level() const noexcept { return level_; }
  int offset() const noexcept { return offset_; }
  std::size_t stage() const noexcept { return stage_; }

 private:
  int level_;
  int offset_;
  std::size_t stage_;
};

}  // namespace atm
