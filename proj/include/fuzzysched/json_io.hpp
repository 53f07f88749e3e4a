#pragma once

#include <json.hpp>

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include "fuzzysched/errors.hpp"
#include "fuzzysched/fuzzy.hpp"

namespace fsched {

using json = nlohmann::json;

/// A number v encodes (v, v, v); anything else is written as [a, m, b].
json fuzzy_to_json(const TriFuzzy& x);

/// 1-based line on which the value addressed by `pointer` starts in `text`.
/// Returns nullopt when the text is not valid JSON or the pointer does not
/// resolve.
std::optional<int> locate_line(std::string_view text, const json::json_pointer& pointer);

/// Schema-checking reader over a parsed document. Every error it raises
/// carries the file name, the JSON pointer and the source line.
class JsonReader {
 public:
  JsonReader(std::string file, std::string_view text);

  const json& root() const { return root_; }
  const std::string& file() const { return file_; }

  [[noreturn]] void fail(const json::json_pointer& at, const std::string& what) const;

  const json& object(const json::json_pointer& at) const;
  const json& array(const json::json_pointer& at) const;
  /// Rejects any key of the object at `at` that is not in `allowed`.
  void only_keys(const json::json_pointer& at, std::initializer_list<std::string_view> allowed) const;
  bool has(const json::json_pointer& at) const { return root_.contains(at); }

  std::string string(const json::json_pointer& at) const;
  double number(const json::json_pointer& at) const;
  double number_in(const json::json_pointer& at, double lo, double hi) const;
  long long integer(const json::json_pointer& at) const;
  TriFuzzy fuzzy(const json::json_pointer& at) const;

 private:
  std::string file_;
  std::string text_;
  json root_;
};

}  // namespace fsched
