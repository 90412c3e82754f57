#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bphf {

// Invalid arguments or mismatched family/pattern/certificate parameters.
class parameter_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input text; carries the 1-based line number of the offense.
class parse_error : public std::runtime_error {
public:
  parse_error(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Requested work exceeds a configured enumeration budget. Never silently
// truncated: callers either raise the budget or pick another route.
class budget_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A builder exhausted its retries / precision escalation without producing a
// family that passes exact verification.
class construction_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace bphf
