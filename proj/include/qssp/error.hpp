#pragma once

#include <stdexcept>
#include <string>

namespace qssp {

/// Malformed text input (TLE, CSV, JSON documents). Carries a 1-based
/// line/column when the location is known, 0 otherwise.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  int line_;
  int column_;
};

/// Scenario configuration is missing, unparsable or inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The exact solver declined an instance whose search tree exceeds its node budget.
class SolverRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qssp
