#pragma once

#include <stdexcept>
#include <string>

namespace edsa {

// Library-wide error. `code` is a short stable token the CLI prints as the
// machine-parsable part of its one-line failure output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace edsa
