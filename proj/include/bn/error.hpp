#pragma once

#include <stdexcept>
#include <string>

namespace bn {

// Error categories map onto CLI exit codes: Input -> 1, Contradiction -> 2,
// SizeLimit -> 3.
enum class ErrorKind { Input, Contradiction, SizeLimit };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& msg) {
  throw Error(ErrorKind::Input, msg);
}

}  // namespace bn
