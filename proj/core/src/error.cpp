#include "wavesearch/error.hpp"

#include <cstdio>

namespace wavesearch {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::index_out_of_range: return "index_out_of_range";
    case ErrorKind::invalid_combination: return "invalid_combination";
    case ErrorKind::unsupported_mode: return "unsupported_mode";
    case ErrorKind::mistimed_tap: return "mistimed_tap";
    case ErrorKind::undefined_ratio: return "undefined_ratio";
    case ErrorKind::degenerate_state: return "degenerate_state";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

namespace {

std::string mistimed_message(double displacement, double tolerance) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "tap at nonzero displacement: |x|=%.6e exceeds tolerance %.6e",
                displacement, tolerance);
  return buf;
}

}  // namespace

MistimedTapError::MistimedTapError(double displacement, double tolerance)
    : Error(ErrorKind::mistimed_tap, mistimed_message(displacement, tolerance)),
      displacement_(displacement),
      tolerance_(tolerance) {}

}  // namespace wavesearch
