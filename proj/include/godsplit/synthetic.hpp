#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace godsplit {

// A god class with planted responsibilities. Each responsibility owns its own
// fields and vocabulary, and its methods call each other but never across
// responsibilities.
struct SyntheticSpec {
  std::string class_name = "SyntheticGodClass";
  int responsibilities = 2;
  int methods_per_responsibility = 8;
  int fields_per_responsibility = 3;
  double field_access_probability = 0.7;  // each method touches at least one field
  double call_probability = 0.4;          // chance of each extra within-group call
  std::uint64_t seed = 1;
};

struct SyntheticClass {
  std::string class_name;
  std::string source;         // Java source text
  std::vector<int> planted;   // responsibility per method, in declaration order
};

// Throws ConfigError when the spec asks for more responsibilities than there
// are vocabulary themes, or for empty groups.
SyntheticClass generate_god_class(const SyntheticSpec& spec);

// `classes` specs with 2-4 responsibilities and 5-8 methods each, all derived
// from `seed`.
std::vector<SyntheticSpec> synthetic_corpus(int classes, std::uint64_t seed);

// {"class": name, "planted": [..]}
std::string planted_to_json(const SyntheticClass& synthetic);

}  // namespace godsplit
