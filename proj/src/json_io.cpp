#include "fuzzysched/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fsched {

SchemaError::SchemaError(std::string file, std::string pointer, std::optional<int> line,
                         std::string what)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << file;
        if (line) os << ':' << *line;
        os << ": " << (pointer.empty() ? "/" : pointer) << ": " << what;
        return os.str();
      }()),
      file_(std::move(file)),
      pointer_(std::move(pointer)),
      line_(line),
      detail_(std::move(what)) {}

json fuzzy_to_json(const TriFuzzy& x) {
  if (x.is_crisp()) return x.m;
  return json::array({x.a, x.m, x.b});
}

namespace {

std::string escape_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

// Walks the raw text in step with the JSON grammar, tracking the pointer of
// the value under the cursor. Only structure matters here; nlohmann has
// already validated the document by the time this runs.
class LineScanner {
 public:
  LineScanner(std::string_view text, std::string target) : s_(text), target_(std::move(target)) {}

  std::optional<int> run() {
    if (!value("")) return std::nullopt;
    return found_;
  }

 private:
  void ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r')) {
      if (s_[i_] == '\n') ++line_;
      ++i_;
    }
  }

  bool string_token(std::string* out) {
    if (i_ >= s_.size() || s_[i_] != '"') return false;
    const size_t begin = ++i_;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\') ++i_;
      ++i_;
    }
    if (i_ >= s_.size()) return false;
    if (out) {
      // Keys with escapes are rare in our schemas; decode via nlohmann.
      std::string_view raw = s_.substr(begin - 1, i_ - begin + 2);
      *out = json::parse(raw).get<std::string>();
    }
    ++i_;
    return true;
  }

  bool value(const std::string& path) {
    ws();
    if (i_ >= s_.size()) return false;
    if (!found_ && path == target_) found_ = line_;
    const char c = s_[i_];
    if (c == '{') {
      ++i_;
      ws();
      if (i_ < s_.size() && s_[i_] == '}') return ++i_, true;
      while (true) {
        ws();
        std::string key;
        if (!string_token(&key)) return false;
        ws();
        if (i_ >= s_.size() || s_[i_] != ':') return false;
        ++i_;
        if (!value(path + "/" + escape_token(key))) return false;
        ws();
        if (i_ < s_.size() && s_[i_] == ',') {
          ++i_;
          continue;
        }
        if (i_ < s_.size() && s_[i_] == '}') return ++i_, true;
        return false;
      }
    }
    if (c == '[') {
      ++i_;
      ws();
      if (i_ < s_.size() && s_[i_] == ']') return ++i_, true;
      for (size_t idx = 0;; ++idx) {
        if (!value(path + "/" + std::to_string(idx))) return false;
        ws();
        if (i_ < s_.size() && s_[i_] == ',') {
          ++i_;
          continue;
        }
        if (i_ < s_.size() && s_[i_] == ']') return ++i_, true;
        return false;
      }
    }
    if (c == '"') return string_token(nullptr);
    while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != '}' && s_[i_] != ']' && s_[i_] != ' ' &&
           s_[i_] != '\n' && s_[i_] != '\r' && s_[i_] != '\t') {
      ++i_;
    }
    return true;
  }

  std::string_view s_;
  std::string target_;
  size_t i_ = 0;
  int line_ = 1;
  std::optional<int> found_;
};

int line_of_byte(std::string_view text, size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

std::optional<int> locate_line(std::string_view text, const json::json_pointer& pointer) {
  return LineScanner(text, pointer.to_string()).run();
}

JsonReader::JsonReader(std::string file, std::string_view text) : file_(std::move(file)), text_(text) {
  try {
    root_ = json::parse(text_);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw SchemaError(file_, "", line_of_byte(text_, at), "malformed JSON: " + std::string(e.what()));
  }
}

void JsonReader::fail(const json::json_pointer& at, const std::string& what) const {
  json::json_pointer p = at;
  // Point at the nearest existing ancestor when the value itself is missing.
  while (!p.empty() && !root_.contains(p)) p = p.parent_pointer();
  throw SchemaError(file_, at.to_string(), locate_line(text_, p), what);
}

const json& JsonReader::object(const json::json_pointer& at) const {
  if (!root_.contains(at)) fail(at, "missing object");
  const json& v = root_.at(at);
  if (!v.is_object()) fail(at, "expected an object");
  return v;
}

const json& JsonReader::array(const json::json_pointer& at) const {
  if (!root_.contains(at)) fail(at, "missing array");
  const json& v = root_.at(at);
  if (!v.is_array()) fail(at, "expected an array");
  return v;
}

void JsonReader::only_keys(const json::json_pointer& at,
                           std::initializer_list<std::string_view> allowed) const {
  for (const auto& [key, _] : object(at).items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(at / key, "unknown key '" + key + "'");
    }
  }
}

std::string JsonReader::string(const json::json_pointer& at) const {
  if (!root_.contains(at)) fail(at, "missing string");
  const json& v = root_.at(at);
  if (!v.is_string()) fail(at, "expected a string");
  return v.get<std::string>();
}

double JsonReader::number(const json::json_pointer& at) const {
  if (!root_.contains(at)) fail(at, "missing number");
  const json& v = root_.at(at);
  if (!v.is_number()) fail(at, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(at, "expected a finite number");
  return d;
}

double JsonReader::number_in(const json::json_pointer& at, double lo, double hi) const {
  const double d = number(at);
  if (d < lo || d > hi) {
    std::ostringstream os;
    os << "value " << d << " outside [" << lo << ", " << hi << "]";
    fail(at, os.str());
  }
  return d;
}

long long JsonReader::integer(const json::json_pointer& at) const {
  if (!root_.contains(at)) fail(at, "missing integer");
  const json& v = root_.at(at);
  if (!v.is_number_integer()) fail(at, "expected an integer");
  return v.get<long long>();
}

TriFuzzy JsonReader::fuzzy(const json::json_pointer& at) const {
  if (!root_.contains(at)) fail(at, "missing fuzzy number");
  const json& v = root_.at(at);
  if (v.is_number()) return TriFuzzy::crisp(number(at));
  if (!v.is_array() || v.size() != 3) fail(at, "expected a number or an [a, m, b] triple");
  const TriFuzzy x{number(at / 0), number(at / 1), number(at / 2)};
  if (!x.valid()) fail(at, "triangular number requires a <= m <= b");
  return x;
}

}  // namespace fsched
