#ifndef FLOWDEP_ERROR_HPP
#define FLOWDEP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flowdep {

// Bad flags or invalid configuration values. CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unusable input data. CLI exit code 2. When the problem is
// tied to a specific line of a text input, line() is 1-based; 0 otherwise.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line > 0 ? what + " at line " + std::to_string(line) : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Numeric domain violations (non-positive size, |rho| > 1, ...). CLI exit code 3.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flowdep

#endif
