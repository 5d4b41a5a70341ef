#include "godsplit/class_facts.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "godsplit/error.hpp"

namespace godsplit {

using nlohmann::json;

std::size_t ClassFacts::calls_in(MethodId callee) const {
  std::size_t total = 0;
  for (const auto& m : methods) {
    if (auto it = m.internal_calls.find(callee); it != m.internal_calls.end()) total += it->second;
  }
  return total;
}

std::size_t ClassFacts::calls(MethodId caller, MethodId callee) const {
  const auto& calls = methods.at(caller).internal_calls;
  auto it = calls.find(callee);
  return it == calls.end() ? 0 : it->second;
}

void ClassFacts::validate() const {
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const auto& m = methods[i];
    const std::string prefix = "methods[" + std::to_string(i) + "]";
    if (m.id != i) throw SchemaError(prefix + ".id", "id must equal array position");
    for (const auto& v : m.accessed_vars) {
      if (!instance_vars.contains(v))
        throw SchemaError(prefix + ".accessed_vars", "'" + v + "' is not an instance variable");
    }
    for (const auto& [callee, count] : m.internal_calls) {
      if (callee >= methods.size())
        throw SchemaError(prefix + ".internal_calls", "unknown callee id " + std::to_string(callee));
      (void)count;
    }
  }
}

namespace {

json to_json(const ClassFacts& facts) {
  json methods = json::array();
  for (const auto& m : facts.methods) {
    json calls = json::object();
    for (const auto& [callee, count] : m.internal_calls) calls[std::to_string(callee)] = count;
    methods.push_back({{"id", m.id},
                       {"name", m.name},
                       {"arity", m.arity},
                       {"accessed_vars", m.accessed_vars},
                       {"internal_calls", std::move(calls)},
                       {"external_call_count", m.external_call_count},
                       {"text_blob", m.text_blob}});
  }
  return {{"class_name", facts.class_name},
          {"source_id", facts.source_id},
          {"instance_vars", facts.instance_vars},
          {"methods", std::move(methods)}};
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string field_path(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

std::string get_string(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw SchemaError(field_path(path, key), "expected string");
  return v.get<std::string>();
}

std::size_t get_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw SchemaError(path, "expected non-negative integer");
  return v.get<std::size_t>();
}

std::set<std::string> get_string_set(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  const auto p = field_path(path, key);
  if (!v.is_array()) throw SchemaError(p, "expected array");
  std::set<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw SchemaError(p + "[" + std::to_string(i) + "]", "expected string");
    out.insert(v[i].get<std::string>());
  }
  return out;
}

MethodFacts method_from_json(const json& j, std::size_t position) {
  const std::string path = "methods[" + std::to_string(position) + "]";
  if (!j.is_object()) throw SchemaError(path, "expected object");
  MethodFacts m;
  m.id = get_count(require(j, "id", path), path + ".id");
  if (m.id != position) throw SchemaError(path + ".id", "id must equal array position");
  m.name = get_string(j, "name", path);
  m.arity = get_count(require(j, "arity", path), path + ".arity");
  m.accessed_vars = get_string_set(j, "accessed_vars", path);
  const auto& calls = require(j, "internal_calls", path);
  if (!calls.is_object()) throw SchemaError(path + ".internal_calls", "expected object");
  for (const auto& [key, value] : calls.items()) {
    const std::string cp = path + ".internal_calls." + key;
    std::size_t consumed = 0;
    unsigned long long callee = 0;
    try {
      callee = std::stoull(key, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != key.size() || key.empty()) throw SchemaError(cp, "key must be a method id");
    m.internal_calls[static_cast<MethodId>(callee)] = get_count(value, cp);
  }
  m.external_call_count = get_count(require(j, "external_call_count", path), path + ".external_call_count");
  m.text_blob = get_string(j, "text_blob", path);
  return m;
}

ClassFacts from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("$", "expected object");
  ClassFacts facts;
  facts.class_name = get_string(j, "class_name", "");
  facts.source_id = get_string(j, "source_id", "");
  facts.instance_vars = get_string_set(j, "instance_vars", "");
  const auto& methods = require(j, "methods", "");
  if (!methods.is_array()) throw SchemaError("methods", "expected array");
  facts.methods.reserve(methods.size());
  for (std::size_t i = 0; i < methods.size(); ++i) facts.methods.push_back(method_from_json(methods[i], i));
  facts.validate();
  return facts;
}

}  // namespace

std::string save_facts(const ClassFacts& facts) { return to_json(facts).dump(2) + "\n"; }

void save_facts(const ClassFacts& facts, std::ostream& out) { out << save_facts(facts); }

ClassFacts load_facts(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", e.what());
  }
  return from_json(j);
}

ClassFacts load_facts(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_facts(buffer.str());
}

ClassFacts load_facts_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open facts file '" + path + "'");
  return load_facts(in);
}

void save_facts_file(const ClassFacts& facts, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write facts file '" + path + "'");
  save_facts(facts, out);
}

}  // namespace godsplit
