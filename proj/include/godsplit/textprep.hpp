#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "godsplit/class_facts.hpp"

namespace godsplit {

struct BagOfWords {
  MethodId method_id = 0;
  std::map<std::string, std::size_t> counts;

  std::size_t total() const;
  bool empty() const { return counts.empty(); }
  bool operator==(const BagOfWords&) const = default;
};

// Splits on whitespace, underscores, punctuation, digit/letter boundaries and
// camel-case humps ("getXMLNode2_fast" -> get XML Node 2 fast).
std::vector<std::string> tokenize(std::string_view text);

// Lowercased English stopwords plus Java keywords and literals.
class StopwordList {
 public:
  // The bundled English list (version tag in kStopwordListVersion) plus Java keywords.
  static const StopwordList& bundled();
  // Replaces the English part with words from a file: one per line, '#' starts a comment.
  // Java keywords are always included.
  static StopwordList from_file(const std::string& path);
  static StopwordList from_words(const std::vector<std::string>& words);

  bool contains(std::string_view lowercase_word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

inline constexpr std::string_view kStopwordListVersion = "en-179-v1";

std::vector<std::string> filter_tokens(const std::vector<std::string>& tokens,
                                       const StopwordList& stopwords = StopwordList::bundled());

// Rule-based lemma of one token, lowercased. Applying it twice changes nothing.
std::string lemmatize(std::string_view token);

std::vector<std::string> normalize(const std::vector<std::string>& tokens);

BagOfWords bag_of_words(const MethodFacts& method,
                        const StopwordList& stopwords = StopwordList::bundled());

std::vector<BagOfWords> bags_of_words(const ClassFacts& facts,
                                      const StopwordList& stopwords = StopwordList::bundled());

}  // namespace godsplit
