#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace godsplit {

using MethodId = std::size_t;

struct MethodFacts {
  MethodId id = 0;
  std::string name;
  std::size_t arity = 0;
  // Instance variables read or written by the body (a subset of ClassFacts::instance_vars).
  std::set<std::string> accessed_vars;
  // Callee id -> number of call sites. Self-calls are recorded.
  std::map<MethodId, std::size_t> internal_calls;
  std::size_t external_call_count = 0;
  std::string text_blob;

  bool operator==(const MethodFacts&) const = default;
};

struct ClassFacts {
  std::string class_name;
  std::string source_id;
  std::set<std::string> instance_vars;
  std::vector<MethodFacts> methods;

  std::size_t size() const { return methods.size(); }

  // Number of call sites inside the class targeting `callee`.
  std::size_t calls_in(MethodId callee) const;

  // Number of call sites in `caller` targeting `callee`.
  std::size_t calls(MethodId caller, MethodId callee) const;

  // Throws SchemaError if ids are not 0..n-1, a callee id is out of range, or
  // an accessed variable is not declared.
  void validate() const;

  bool operator==(const ClassFacts&) const = default;
};

// JSON facts file (see README for the schema).
std::string save_facts(const ClassFacts& facts);
void save_facts(const ClassFacts& facts, std::ostream& out);
ClassFacts load_facts(const std::string& json_text);
ClassFacts load_facts(std::istream& in);

ClassFacts load_facts_file(const std::string& path);
void save_facts_file(const ClassFacts& facts, const std::string& path);

}  // namespace godsplit
