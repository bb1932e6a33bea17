#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavesearch {

enum class ErrorKind {
  invalid_argument,   // bad size or parameter
  index_out_of_range,
  invalid_combination,
  unsupported_mode,   // e.g. closed-form evolution with damping
  mistimed_tap,       // tap requested while springs are extended
  undefined_ratio,
  degenerate_state,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` lets callers map failures
/// to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by `apply_tap` when the displacement precondition fails.
class MistimedTapError : public Error {
 public:
  MistimedTapError(double displacement, double tolerance);

  double displacement() const noexcept { return displacement_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  double displacement_;
  double tolerance_;
};

}  // namespace wavesearch
