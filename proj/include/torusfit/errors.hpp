#ifndef TORUSFIT_ERRORS_HPP
#define TORUSFIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace torusfit {

// Parameter or argument outside its mathematical domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A quantity whose denominator vanishes (e.g. a degenerate covariance block).
class SingularityError : public DomainError {
public:
  using DomainError::DomainError;
};

// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace torusfit

#endif  // TORUSFIT_ERRORS_HPP
