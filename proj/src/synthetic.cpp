#include "godsplit/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>

#include <nlohmann/json.hpp>

#include "godsplit/error.hpp"
#include "godsplit/rng.hpp"

namespace godsplit {

namespace {

struct Theme {
  std::array<const char*, 8> words;
  const char* helper_type;
};

constexpr std::array<Theme, 10> kThemes{{
    {{"invoice", "tax", "payment", "currency", "discount", "ledger", "refund", "receipt"}, "Billing"},
    {{"parcel", "courier", "route", "warehouse", "pallet", "freight", "carrier", "dispatch"}, "Shipping"},
    {{"pixel", "canvas", "sprite", "texture", "shader", "palette", "viewport", "gradient"}, "Renderer"},
    {{"melody", "rhythm", "tempo", "chord", "speaker", "volume", "harmony", "echo"}, "Mixer"},
    {{"rainfall", "humidity", "forecast", "pressure", "cloud", "thunder", "wind", "climate"}, "Weather"},
    {{"cipher", "token", "password", "firewall", "certificate", "audit", "breach", "vault"}, "Guard"},
    {{"seed", "harvest", "soil", "plant", "fertilizer", "orchard", "compost", "irrigation"}, "Garden"},
    {{"patient", "dose", "symptom", "clinic", "nurse", "diagnosis", "allergy", "vaccine"}, "Clinic"},
    {{"orbit", "planet", "comet", "telescope", "galaxy", "nebula", "eclipse", "asteroid"}, "Observatory"},
    {{"recipe", "oven", "flavor", "spice", "kitchen", "dough", "sauce", "grill"}, "Kitchen"},
}};

constexpr std::array<const char*, 8> kVerbs{"update", "compute", "apply", "check", "merge", "adjust", "record",
                                            "estimate"};

std::string capitalized(std::string word) {
  if (!word.empty()) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
  return word;
}

struct PlannedMethod {
  int group = 0;
  std::string name;
  bool takes_argument = false;
  std::vector<std::size_t> fields;   // indices into the group's fields
  std::vector<std::size_t> callees;  // positions within the group
  std::vector<std::string> words;    // theme words for the comment
};

}  // namespace

SyntheticClass generate_god_class(const SyntheticSpec& spec) {
  if (spec.responsibilities < 1 || spec.responsibilities > static_cast<int>(kThemes.size()))
    throw ConfigError("responsibilities must be between 1 and " + std::to_string(kThemes.size()));
  if (spec.methods_per_responsibility < 1 || spec.fields_per_responsibility < 1)
    throw ConfigError("each responsibility needs at least one method and one field");
  if (spec.fields_per_responsibility > 8) throw ConfigError("at most 8 fields per responsibility");

  Rng rng(spec.seed);
  std::vector<std::size_t> theme_order(kThemes.size());
  std::iota(theme_order.begin(), theme_order.end(), 0);
  for (std::size_t i = theme_order.size() - 1; i > 0; --i) std::swap(theme_order[i], theme_order[rng.below(i + 1)]);

  const auto groups = static_cast<std::size_t>(spec.responsibilities);
  const auto per_group = static_cast<std::size_t>(spec.methods_per_responsibility);
  const auto fields_per_group = static_cast<std::size_t>(spec.fields_per_responsibility);

  std::vector<std::vector<std::string>> fields(groups);
  std::vector<std::vector<PlannedMethod>> methods(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    const Theme& theme = kThemes[theme_order[g]];
    for (std::size_t f = 0; f < fields_per_group; ++f)
      fields[g].push_back(std::string(theme.words[f]) + capitalized(theme.words[(f + 3) % 8]));
    for (std::size_t m = 0; m < per_group; ++m) {
      PlannedMethod pm;
      pm.group = static_cast<int>(g);
      pm.name = std::string(kVerbs[m % kVerbs.size()]) + capitalized(theme.words[m % 8]) +
                capitalized(theme.words[(m + 1 + m / 8) % 8]);
      if (m >= 8) pm.name += std::to_string(m / 8);
      pm.takes_argument = rng.below(2) == 1;
      for (std::size_t f = 0; f < fields_per_group; ++f)
        if (rng.uniform() < spec.field_access_probability) pm.fields.push_back(f);
      if (pm.fields.empty()) pm.fields.push_back(rng.below(fields_per_group));
      for (int w = 0; w < 4; ++w) pm.words.push_back(theme.words[rng.below(8)]);
      methods[g].push_back(std::move(pm));
    }
    // a chain keeps every group connected by calls; extra calls are random
    for (std::size_t m = 1; m < per_group; ++m) methods[g][m].callees.push_back(m - 1);
    for (std::size_t m = 0; m < per_group; ++m)
      for (std::size_t other = 0; other < per_group; ++other)
        if (other != m && other + 1 != m && rng.uniform() < spec.call_probability)
          methods[g][m].callees.push_back(other);
  }

  // declaration order interleaves the groups
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t g = 0; g < groups; ++g)
    for (std::size_t m = 0; m < per_group; ++m) order.emplace_back(g, m);
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  SyntheticClass out;
  out.class_name = spec.class_name;
  std::string& src = out.source;
  src += "package synthetic;\n\nimport java.util.ArrayList;\nimport java.util.List;\n\n";
  src += "/** Generated class with " + std::to_string(groups) + " planted responsibilities. */\n";
  src += "public class " + spec.class_name + " {\n";
  for (std::size_t g = 0; g < groups; ++g) {
    const Theme& theme = kThemes[theme_order[g]];
    for (const auto& f : fields[g]) src += "  private int " + f + ";\n";
    src += "  private List<String> " + std::string(theme.words[7]) + "History = new ArrayList<>();\n";
    fields[g].push_back(std::string(theme.words[7]) + "History");
    src += "  private " + std::string(theme.helper_type) + " " + theme.words[6] + capitalized(theme.helper_type) +
           ";\n";
    fields[g].push_back(std::string(theme.words[6]) + capitalized(theme.helper_type));
  }
  src += "\n";

  for (const auto& [g, m] : order) {
    const PlannedMethod& pm = methods[g][m];
    const Theme& theme = kThemes[theme_order[g]];
    out.planted.push_back(pm.group);
    src += "  /**\n   * " + capitalized(pm.words[0]) + " " + pm.words[1] + " handling for the " + pm.words[2] + " " +
           pm.words[3] + ".\n   */\n";
    src += "  public int " + pm.name + "(" + (pm.takes_argument ? "int amount" : "") + ") {\n";
    src += "    int result = " + std::string(pm.takes_argument ? "amount" : "0") + ";\n";
    for (auto f : pm.fields) src += "    result += " + fields[g][f] + ";\n";
    src += "    " + fields[g][pm.fields.front()] + " = result;\n";
    for (auto c : pm.callees) {
      const PlannedMethod& callee = methods[g][c];
      src += "    result += " + callee.name + "(" + (callee.takes_argument ? "result" : "") + ");\n";
    }
    if (m % 3 == 0) {
      src += "    " + fields[g][fields_per_group] + ".add(\"" + pm.words[0] + "\");\n";
    }
    if (m % 4 == 1) {
      src += "    " + fields[g][fields_per_group + 1] + ".notify" + capitalized(theme.words[5]) + "(result);\n";
    }
    src += "    return result;\n  }\n\n";
  }
  src.pop_back();
  src += "}\n";
  return out;
}

std::vector<SyntheticSpec> synthetic_corpus(int classes, std::uint64_t seed) {
  if (classes < 0) throw ConfigError("class count must not be negative");
  Rng rng(seed);
  std::vector<SyntheticSpec> specs;
  for (int c = 0; c < classes; ++c) {
    SyntheticSpec s;
    s.class_name = "SyntheticGodClass" + std::to_string(c + 1);
    s.responsibilities = 2 + static_cast<int>(rng.below(3));
    s.methods_per_responsibility = 5 + static_cast<int>(rng.below(4));
    s.fields_per_responsibility = 2 + static_cast<int>(rng.below(3));
    s.seed = rng.next_u64();
    specs.push_back(s);
  }
  return specs;
}

std::string planted_to_json(const SyntheticClass& synthetic) {
  nlohmann::json j;
  j["class"] = synthetic.class_name;
  j["planted"] = synthetic.planted;
  return j.dump() + "\n";
}

}  // namespace godsplit
