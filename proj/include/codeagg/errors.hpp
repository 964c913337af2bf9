#ifndef CODEAGG_ERRORS_HPP
#define CODEAGG_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace codeagg {

// All library errors carry a stable machine-readable code ("shape-error",
// "invalid-probability", ...) next to the human-readable message, so callers
// can branch on code() without parsing text.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace codeagg

#endif
