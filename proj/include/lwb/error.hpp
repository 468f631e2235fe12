#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lwb {

/// Error carrying a stable machine-readable code ("jacobi_violation",
/// "step_too_large", ...) next to the human-readable message. The code is
/// what CLI reports and tests match on.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

}  // namespace lwb
