#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fsched {

/// Malformed input document: names the file, the JSON pointer and, when it
/// could be located, the 1-based line of the offending value.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string file, std::string pointer, std::optional<int> line, std::string what);

  const std::string& file() const { return file_; }
  const std::string& pointer() const { return pointer_; }
  std::optional<int> line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string file_;
  std::string pointer_;
  std::optional<int> line_;
  std::string detail_;
};

/// Rule base that cannot be evaluated (unresolved names, empty rule list).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The rolling loop swept past every latest start without allocating anything.
class StallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance too large for an exhaustive oracle.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fsched
