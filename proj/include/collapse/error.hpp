#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace collapse {

enum class ErrorKind {
  invalid_argument,
  packet_too_narrow,
  packet_outside_grid,
  grid_mismatch,
  zero_vector,
  unstable_dt,
  collapsed_to_zero,
  degenerate_lobes,
  too_few_samples,
  insufficient_signal,
  parse_error,
  validation_error,
};

std::string_view to_string(ErrorKind kind);

class CollapseError : public std::runtime_error {
 public:
  CollapseError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace collapse
