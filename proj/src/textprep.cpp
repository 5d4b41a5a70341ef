#include "godsplit/textprep.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <unordered_map>

#include "godsplit/error.hpp"
#include "godsplit/java_parser.hpp"

namespace godsplit {

namespace {

// English stopwords (the widely used 179-word NLTK list).
constexpr std::array<std::string_view, 179> kEnglishStopwords = {
    "i",        "me",      "my",        "myself",  "we",       "our",     "ours",     "ourselves",
    "you",      "you're",  "you've",    "you'll",  "you'd",    "your",    "yours",    "yourself",
    "yourselves", "he",    "him",       "his",     "himself",  "she",     "she's",    "her",
    "hers",     "herself", "it",        "it's",    "its",      "itself",  "they",     "them",
    "their",    "theirs",  "themselves", "what",   "which",    "who",     "whom",     "this",
    "that",     "that'll", "these",     "those",   "am",       "is",      "are",      "was",
    "were",     "be",      "been",      "being",   "have",     "has",     "had",      "having",
    "do",       "does",    "did",       "doing",   "a",        "an",      "the",      "and",
    "but",      "if",      "or",        "because", "as",       "until",   "while",    "of",
    "at",       "by",      "for",       "with",    "about",    "against", "between",  "into",
    "through",  "during",  "before",    "after",   "above",    "below",   "to",       "from",
    "up",       "down",    "in",        "out",     "on",       "off",     "over",     "under",
    "again",    "further", "then",      "once",    "here",     "there",   "when",     "where",
    "why",      "how",     "all",       "any",     "both",     "each",    "few",      "more",
    "most",     "other",   "some",      "such",    "no",       "nor",     "not",      "only",
    "own",      "same",    "so",        "than",    "too",      "very",    "s",        "t",
    "can",      "will",    "just",      "don",     "don't",    "should",  "should've", "now",
    "d",        "ll",      "m",         "o",       "re",       "ve",      "y",        "ain",
    "aren",     "aren't",  "couldn",    "couldn't", "didn",    "didn't",  "doesn",    "doesn't",
    "hadn",     "hadn't",  "hasn",      "hasn't",  "haven",    "haven't", "isn",      "isn't",
    "ma",       "mightn",  "mightn't",  "mustn",   "mustn't",  "needn",   "needn't",  "shan",
    "shan't",   "shouldn", "shouldn't", "wasn",    "wasn't",   "weren",   "weren't",  "won",
    "won't",    "wouldn",  "wouldn't"};

// Irregular forms and words whose endings only look inflected. Every value is
// itself a fixed point of the suffix rules.
const std::unordered_map<std::string_view, std::string_view>& irregular_forms() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      {"children", "child"},   {"men", "man"},           {"women", "woman"},
      {"people", "person"},    {"mice", "mouse"},        {"feet", "foot"},
      {"teeth", "tooth"},      {"indices", "index"},     {"vertices", "vertex"},
      {"matrices", "matrix"},  {"analyses", "analysis"}, {"criteria", "criterion"},
      {"has", "have"},         {"had", "have"},          {"did", "do"},
      {"done", "do"},          {"goes", "go"},           {"went", "go"},
      {"gone", "go"},          {"made", "make"},         {"found", "find"},
      {"built", "build"},      {"got", "get"},           {"gotten", "get"},
      {"written", "write"},    {"wrote", "write"},       {"sent", "send"},
      {"began", "begin"},      {"begun", "begin"},       {"brought", "bring"},
      {"bought", "buy"},       {"caught", "catch"},      {"thought", "think"},
      {"taught", "teach"},     {"held", "hold"},         {"kept", "keep"},
      {"left", "leave"},       {"lost", "lose"},         {"meant", "mean"},
      {"ran", "run"},          {"said", "say"},          {"saw", "see"},
      {"seen", "see"},         {"sold", "sell"},         {"told", "tell"},
      {"took", "take"},        {"taken", "take"},        {"understood", "understand"},
      {"used", "use"},         {"using", "use"},         {"uses", "use"},
      {"given", "give"},       {"gave", "give"},         {"chosen", "choose"},
      {"chose", "choose"},     {"known", "know"},        {"knew", "know"},
      {"shown", "show"},       {"thrown", "throw"},      {"threw", "throw"},
      {"drawn", "draw"},       {"drew", "draw"},         {"caching", "cache"},
      {"cached", "cache"},     {"caches", "cache"},      {"created", "create"},
      {"creating", "create"},  {"changed", "change"},    {"changing", "change"},
      {"deleted", "delete"},   {"deleting", "delete"},   {"completed", "complete"},
      {"completing", "complete"}, {"ignored", "ignore"}, {"ignoring", "ignore"},
      {"escaped", "escape"},   {"escaping", "escape"},   {"arranged", "arrange"},
      {"arranging", "arrange"}, {"ranged", "range"},     {"ranging", "range"},
      {"causes", "cause"},     {"caused", "cause"},      {"causing", "cause"},
      // look inflected, are not
      {"string", "string"},    {"thing", "thing"},       {"nothing", "nothing"},
      {"something", "something"}, {"anything", "anything"}, {"everything", "everything"},
      {"during", "during"},    {"morning", "morning"},   {"evening", "evening"},
      {"ceiling", "ceiling"},  {"embed", "embed"},       {"hundred", "hundred"},
      {"status", "status"},    {"bus", "bus"},           {"alias", "alias"},
      {"canvas", "canvas"},    {"atlas", "atlas"},       {"bias", "bias"},
      {"news", "news"},        {"series", "series"},     {"species", "species"},
      {"always", "always"},    {"analysis", "analysis"}, {"basis", "basis"},
      {"axis", "axis"},        {"this", "this"},         {"yes", "yes"},
      {"less", "less"},        {"unless", "unless"},     {"across", "across"},
      {"plus", "plus"},        {"minus", "minus"},       {"thus", "thus"},
      {"focus", "focus"},      {"bonus", "bonus"},       {"radius", "radius"},
      {"corpus", "corpus"},    {"lens", "lens"},         {"gas", "gas"},
      {"chaos", "chaos"},      {"whereas", "whereas"},   {"previous", "previous"},
      {"various", "various"},  {"obvious", "obvious"},   {"synchronous", "synchronous"},
      {"asynchronous", "asynchronous"}, {"numerous", "numerous"}, {"does", "do"},
  };
  return table;
}

bool is_vowel_at(std::string_view w, std::size_t i) {
  const char c = w[i];
  if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return true;
  return c == 'y' && i > 0 && !is_vowel_at(w, i - 1);
}

bool is_consonant_at(std::string_view w, std::size_t i) {
  return std::isalpha(static_cast<unsigned char>(w[i])) && !is_vowel_at(w, i);
}

bool has_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (is_vowel_at(w, i)) return true;
  return false;
}

// Number of vowel-consonant sequences.
int measure(std::string_view w) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool v = is_vowel_at(w, i);
    if (prev_vowel && !v) ++m;
    prev_vowel = v;
  }
  return m;
}

bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  return is_consonant_at(w, n - 3) && is_vowel_at(w, n - 2) && is_consonant_at(w, n - 1) &&
         last != 'w' && last != 'x' && last != 'y';
}

bool consonant_before(std::string_view w, std::size_t suffix_len) {
  return w.size() > suffix_len && is_consonant_at(w, w.size() - suffix_len - 1);
}

bool wants_final_e(std::string_view s) {
  const std::size_t n = s.size();
  if (n < 2) return false;
  const char last = s[n - 1];
  if (last == 'v') return true;
  if (last == 'z') return s[n - 2] != 'z';
  if (last == 'c') return s[n - 2] != 'c' && s[n - 2] != 'k';
  if (last == 'l' && std::string_view("bcdfgkptz").find(s[n - 2]) != std::string_view::npos) return true;
  if (last == 's') return !s.ends_with("ss") && (!s.ends_with("us") || s.ends_with("aus"));
  if (s.ends_with("at") || s.ends_with("ut") || s.ends_with("ar") || s.ends_with("ur") ||
      s.ends_with("ib") || s.ends_with("ud") || s.ends_with("od") || s.ends_with("id") ||
      s.ends_with("ok") || s.ends_with("am") || s.ends_with("um"))
    return consonant_before(s, 2);
  if (s.ends_with("rg") || s.ends_with("dg") || s.ends_with("uir")) return true;
  if (s.ends_with("ag")) return n >= 5;
  if (s.ends_with("il") || s.ends_with("in")) return n >= 5 && consonant_before(s, 2);
  return measure(s) == 1 && ends_cvc(s);
}

// Tidies a stem left by removing -ed/-ing.
std::string restore_stem(std::string stem) {
  const std::size_t n = stem.size();
  if (n > 3 && stem[n - 1] == stem[n - 2] && is_consonant_at(stem, n - 1) &&
      std::string_view("lsz").find(stem[n - 1]) == std::string_view::npos) {
    stem.pop_back();
    return stem;
  }
  if (wants_final_e(stem)) stem.push_back('e');
  return stem;
}

std::string lemmatize_once(const std::string& w) {
  const auto& irregular = irregular_forms();
  if (auto it = irregular.find(w); it != irregular.end()) return std::string(it->second);
  const std::size_t n = w.size();
  if (n < 4) return w;
  if (w.ends_with("ies")) return w.substr(0, n - 3) + "y";
  if (w.ends_with("sses")) return w.substr(0, n - 2);
  if (w.ends_with("xes") || w.ends_with("zes") || w.ends_with("ches") || w.ends_with("shes"))
    return w.substr(0, n - 2);
  if (w.ends_with("uses") && n > 5 && is_consonant_at(w, n - 5)) return w.substr(0, n - 2);
  if (w.ends_with("s") && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is"))
    return w.substr(0, n - 1);
  if (w.ends_with("eed")) return w;
  if (w.ends_with("ied")) return w.substr(0, n - 3) + "y";
  if (w.ends_with("ed")) {
    std::string stem = w.substr(0, n - 2);
    if (stem.size() >= 3 && has_vowel(stem)) return restore_stem(std::move(stem));
    return w;
  }
  if (w.ends_with("ing")) {
    std::string stem = w.substr(0, n - 3);
    if (stem.size() >= 3 && has_vowel(stem)) return restore_stem(std::move(stem));
    return w;
  }
  return w;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

enum class CharClass { Other, Lower, Upper, Digit };

CharClass classify(unsigned char c) {
  if (std::islower(c)) return CharClass::Lower;
  if (std::isupper(c)) return CharClass::Upper;
  if (std::isdigit(c)) return CharClass::Digit;
  return CharClass::Other;
}

}  // namespace

std::size_t BagOfWords::total() const {
  std::size_t sum = 0;
  for (const auto& [word, count] : counts) sum += count;
  return sum;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto cls = classify(static_cast<unsigned char>(text[i]));
    if (cls == CharClass::Other) {
      flush();
      continue;
    }
    if (!current.empty()) {
      const auto prev = classify(static_cast<unsigned char>(current.back()));
      const bool digit_boundary = (prev == CharClass::Digit) != (cls == CharClass::Digit);
      const bool hump = prev == CharClass::Lower && cls == CharClass::Upper;
      const bool acronym_end = prev == CharClass::Upper && cls == CharClass::Upper && i + 1 < text.size() &&
                               classify(static_cast<unsigned char>(text[i + 1])) == CharClass::Lower;
      if (digit_boundary || hump || acronym_end) flush();
    }
    current.push_back(text[i]);
  }
  flush();
  return out;
}

const StopwordList& StopwordList::bundled() {
  static const StopwordList list = [] {
    std::vector<std::string> words(kEnglishStopwords.begin(), kEnglishStopwords.end());
    return from_words(words);
  }();
  return list;
}

StopwordList StopwordList::from_words(const std::vector<std::string>& words) {
  StopwordList list;
  for (const auto& w : words) list.words_.insert(to_lower(w));
  for (const auto kw : java_keywords()) list.words_.insert(std::string(kw));
  return list;
}

StopwordList StopwordList::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file '" + path + "'");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(first, last - first + 1));
  }
  return from_words(words);
}

bool StopwordList::contains(std::string_view lowercase_word) const {
  return words_.find(lowercase_word) != words_.end();
}

std::vector<std::string> filter_tokens(const std::vector<std::string>& tokens, const StopwordList& stopwords) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (t.size() < 2 || all_digits(t)) continue;
    if (stopwords.contains(to_lower(t))) continue;
    out.push_back(t);
  }
  return out;
}

std::string lemmatize(std::string_view token) {
  std::string word = to_lower(token);
  // Every rule either maps to a fixed point or shortens the word, so this terminates.
  for (std::size_t guard = 0; guard <= token.size() + 1; ++guard) {
    std::string next = lemmatize_once(word);
    if (next == word) break;
    word = std::move(next);
  }
  return word;
}

std::vector<std::string> normalize(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(lemmatize(t));
  return out;
}

BagOfWords bag_of_words(const MethodFacts& method, const StopwordList& stopwords) {
  BagOfWords bag;
  bag.method_id = method.id;
  // Lemmas can land on a stopword ("others" -> "other"), hence the second filter.
  for (const auto& word : filter_tokens(normalize(filter_tokens(tokenize(method.text_blob), stopwords)), stopwords))
    ++bag.counts[word];
  return bag;
}

std::vector<BagOfWords> bags_of_words(const ClassFacts& facts, const StopwordList& stopwords) {
  std::vector<BagOfWords> bags;
  bags.reserve(facts.size());
  for (const auto& m : facts.methods) bags.push_back(bag_of_words(m, stopwords));
  return bags;
}

}  // namespace godsplit
