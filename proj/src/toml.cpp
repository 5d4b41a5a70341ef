#include "godsplit/toml.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "godsplit/error.hpp"

namespace godsplit {

namespace {

class LineParser {
 public:
  LineParser(const std::string& text, int line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_space();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string key() {
    skip_space();
    if (pos_ < text_.size() && (text_[pos_] == '"' || text_[pos_] == '\'')) return quoted();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-'))
      ++pos_;
    if (start == pos_) fail("expected a key");
    return text_.substr(start, pos_ - start);
  }

  // dotted name inside [ ]
  std::string dotted() {
    std::string name = key();
    while (consume('.')) name += "." + key();
    return name;
  }

  TomlValue value() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected a value");
    TomlValue v;
    v.line = line_;
    const char c = text_[pos_];
    if (c == '"' || c == '\'') {
      v.kind = TomlValue::Kind::String;
      v.string = quoted();
      return v;
    }
    if (c == '[') {
      ++pos_;
      v.kind = TomlValue::Kind::Array;
      if (consume(']')) return v;
      while (true) {
        v.items.push_back(value());
        if (v.items.back().kind == TomlValue::Kind::Array) fail("nested arrays are not supported");
        if (consume(']')) break;
        if (!consume(',')) fail("expected ',' or ']' in array");
        if (consume(']')) break;  // trailing comma
      }
      return v;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '#' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::string word = text_.substr(start, pos_ - start);
    if (word == "true" || word == "false") {
      v.kind = TomlValue::Kind::Boolean;
      v.boolean = word == "true";
      return v;
    }
    word.erase(std::remove(word.begin(), word.end(), '_'), word.end());
    if (word.empty()) fail("expected a value");
    const char* first = word.data() + (word[0] == '+' ? 1 : 0);
    const char* last = word.data() + word.size();
    if (word.find_first_of(".eE") == std::string::npos || word.starts_with("0x")) {
      long long i = 0;
      auto [end, ec] = std::from_chars(first, last, i);
      if (ec == std::errc() && end == last) {
        v.kind = TomlValue::Kind::Integer;
        v.integer = i;
        v.number = static_cast<double>(i);
        return v;
      }
    }
    double d = 0.0;
    auto [end, ec] = std::from_chars(first, last, d);
    if (ec != std::errc() || end != last) fail("cannot read value '" + text_.substr(start, pos_ - start) + "'");
    v.kind = TomlValue::Kind::Float;
    v.number = d;
    return v;
  }

 private:
  std::string quoted() {
    const char quote = text_[pos_++];
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != quote) {
      char c = text_[pos_++];
      if (quote == '"' && c == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += c;
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  const std::string& text_;
  int line_;
  std::size_t pos_ = 0;
};

const char* kind_name(TomlValue::Kind kind) {
  switch (kind) {
    case TomlValue::Kind::String: return "string";
    case TomlValue::Kind::Integer: return "integer";
    case TomlValue::Kind::Float: return "float";
    case TomlValue::Kind::Boolean: return "boolean";
    case TomlValue::Kind::Array: return "array";
  }
  return "?";
}

}  // namespace

TomlDocument parse_toml(const std::string& text) {
  TomlDocument doc;
  doc[""];
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    LineParser p(raw, line);
    if (p.at_end_or_comment()) continue;
    if (p.consume('[')) {
      if (p.consume('[')) p.fail("arrays of tables are not supported");
      current = p.dotted();
      if (!p.consume(']')) p.fail("expected ']'");
      if (!p.at_end_or_comment()) p.fail("unexpected text after section header");
      if (!doc.emplace(current, std::map<std::string, TomlValue>{}).second && current != "")
        p.fail("duplicate section [" + current + "]");
      continue;
    }
    const std::string key = p.key();
    if (!p.consume('=')) p.fail("expected '=' after key '" + key + "'");
    TomlValue value = p.value();
    if (!p.at_end_or_comment()) p.fail("unexpected text after value");
    if (!doc[current].emplace(key, std::move(value)).second) p.fail("duplicate key '" + key + "'");
  }
  return doc;
}

TomlDocument parse_toml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_toml(buffer.str());
}

const TomlValue* TomlSection::find(const std::string& key) const {
  if (!values_) return nullptr;
  auto it = values_->find(key);
  return it == values_->end() ? nullptr : &it->second;
}

bool TomlSection::has(const std::string& key) const { return find(key) != nullptr; }

namespace {
[[noreturn]] void type_error(const std::string& section, const std::string& key, const TomlValue& v,
                             const char* wanted) {
  const std::string where = section.empty() ? key : section + "." + key;
  throw ConfigError("line " + std::to_string(v.line) + ": " + where + " must be " + wanted + ", got " +
                    kind_name(v.kind));
}
}  // namespace

std::string TomlSection::get_string(const std::string& key, const std::string& fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::String) type_error(name_, key, *v, "a string");
  return v->string;
}

long long TomlSection::get_integer(const std::string& key, long long fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::Integer) type_error(name_, key, *v, "an integer");
  return v->integer;
}

double TomlSection::get_number(const std::string& key, double fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::Integer && v->kind != TomlValue::Kind::Float) type_error(name_, key, *v, "a number");
  return v->number;
}

bool TomlSection::get_bool(const std::string& key, bool fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::Boolean) type_error(name_, key, *v, "a boolean");
  return v->boolean;
}

std::vector<std::string> TomlSection::get_strings(const std::string& key,
                                                  const std::vector<std::string>& fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::Array) type_error(name_, key, *v, "an array of strings");
  std::vector<std::string> out;
  for (const auto& item : v->items) {
    if (item.kind != TomlValue::Kind::String) type_error(name_, key, item, "an array of strings");
    out.push_back(item.string);
  }
  return out;
}

void TomlSection::expect_only(const std::vector<std::string>& known) const {
  if (!values_) return;
  for (const auto& [key, value] : *values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      const std::string where = name_.empty() ? key : name_ + "." + key;
      throw ConfigError("line " + std::to_string(value.line) + ": unknown key " + where);
    }
  }
}

TomlSection section(const TomlDocument& doc, const std::string& name) {
  auto it = doc.find(name);
  return {name, it == doc.end() ? nullptr : &it->second};
}

}  // namespace godsplit
