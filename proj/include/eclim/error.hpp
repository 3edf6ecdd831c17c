#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eclim {

enum class ErrorCode {
  dimension_mismatch,
  invalid_input,
  non_convergence,
  verification_failed,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::verification_failed: return "verification_failed";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require_same_dim(long a, long b, std::string_view context) {
  if (a != b) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(context) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                    std::to_string(b) + ")");
  }
}

}  // namespace eclim
