#pragma once

#include <map>
#include <string>
#include <vector>

namespace godsplit {

// Value of the small TOML subset used by config and manifest files: strings,
// integers, floats, booleans and single-line arrays of those.
struct TomlValue {
  enum class Kind { String, Integer, Float, Boolean, Array };
  Kind kind = Kind::String;
  std::string string;
  long long integer = 0;
  double number = 0.0;  // also set for integers
  bool boolean = false;
  std::vector<TomlValue> items;
  int line = 0;
};

// section name ("" before the first header) -> key -> value
using TomlDocument = std::map<std::string, std::map<std::string, TomlValue>>;

// Supports [section.name] headers, bare or quoted keys, '#' comments, basic
// strings with \" \\ \n \t escapes, literal 'strings', numbers with optional
// underscores, true/false and [a, b] arrays. Throws ConfigError with the line
// number on anything else, including duplicate keys or sections.
TomlDocument parse_toml(const std::string& text);

TomlDocument parse_toml_file(const std::string& path);

// Typed accessors; each throws ConfigError naming section.key on a type error.
class TomlSection {
 public:
  TomlSection(std::string name, const std::map<std::string, TomlValue>* values)
      : name_(std::move(name)), values_(values) {}

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_integer(const std::string& key, long long fallback) const;
  double get_number(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;
  // Throws ConfigError if the section holds a key outside `known`.
  void expect_only(const std::vector<std::string>& known) const;

 private:
  const TomlValue* find(const std::string& key) const;
  std::string name_;
  const std::map<std::string, TomlValue>* values_;
};

TomlSection section(const TomlDocument& doc, const std::string& name);

}  // namespace godsplit
