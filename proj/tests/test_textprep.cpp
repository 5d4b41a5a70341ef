#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "godsplit/error.hpp"
#include "godsplit/java_parser.hpp"
#include "godsplit/rng.hpp"
#include "godsplit/textprep.hpp"

using namespace godsplit;
using Tokens = std::vector<std::string>;

namespace {

MethodFacts with_blob(std::string blob) {
  MethodFacts m;
  m.id = 4;
  m.text_blob = std::move(blob);
  return m;
}

}  // namespace

TEST(Tokenize, Empty) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, SplitRules) {
  EXPECT_EQ(tokenize("getXMLNode2_fast"), (Tokens{"get", "XML", "Node", "2", "fast"}));
  EXPECT_EQ(tokenize("parse_document"), (Tokens{"parse", "document"}));
  EXPECT_EQ(tokenize("XMLParser"), (Tokens{"XML", "Parser"}));
  EXPECT_EQ(tokenize("a.b(c, d);\n\t// HTTPServer2Go"), (Tokens{"a", "b", "c", "d", "HTTP", "Server", "2", "Go"}));
  EXPECT_EQ(tokenize("__x__"), (Tokens{"x"}));
  EXPECT_EQ(tokenize("utf8Value"), (Tokens{"utf", "8", "Value"}));
}

TEST(Tokenize, OrderPreservedAndNoEmptyTokens) {
  Rng rng(8);
  const std::string alphabet = "aZ9_ .(){}Xy";
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (int i = 0; i < 30; ++i) text += alphabet[rng.below(alphabet.size())];
    std::string joined;
    for (const auto& t : tokenize(text)) {
      ASSERT_FALSE(t.empty());
      joined += t;
    }
    std::string alnum;
    for (char c : text)
      if (std::isalnum(static_cast<unsigned char>(c))) alnum += c;
    ASSERT_EQ(joined, alnum) << text;
  }
}

TEST(Filter, Examples) {
  EXPECT_EQ(filter_tokens({"the", "return", "parse"}), (Tokens{"parse"}));
  EXPECT_EQ(filter_tokens({"2", "x"}), Tokens{});
  EXPECT_EQ(filter_tokens({}), Tokens{});
  EXPECT_EQ(filter_tokens({"The", "NULL", "True", "Node"}), (Tokens{"Node"}));
}

TEST(Filter, AllJavaKeywordsRemoved) {
  for (const auto keyword : java_keywords())
    EXPECT_TRUE(filter_tokens({std::string(keyword)}).empty()) << keyword;
}

TEST(Filter, BundledListVersion) {
  EXPECT_EQ(kStopwordListVersion, "en-179-v1");
  EXPECT_GE(StopwordList::bundled().size(), 179u);
}

TEST(Filter, OverrideFile) {
  const auto path = std::filesystem::temp_directory_path() / "godsplit_stopwords.txt";
  {
    std::ofstream out(path);
    out << "# custom list\nnode  \n\nParse # trailing comment\n";
  }
  const StopwordList list = StopwordList::from_file(path.string());
  EXPECT_EQ(filter_tokens({"the", "node", "parse", "return", "tree"}, list), (Tokens{"the", "tree"}));
  std::filesystem::remove(path);
  EXPECT_THROW(StopwordList::from_file(path.string()), DataError);
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize({"Parsing"}), (Tokens{"parse"}));
  EXPECT_EQ(normalize({"nodes"}), (Tokens{"node"}));
  EXPECT_EQ(normalize({"xml"}), (Tokens{"xml"}));
  EXPECT_EQ(normalize({"classes", "entries", "parsed", "Children"}), (Tokens{"class", "entry", "parse", "child"}));
}

TEST(Normalize, Idempotent) {
  const Tokens words{"Parsing", "nodes", "running", "stopped", "boxes", "queries", "status", "analysis",
                     "ran",     "buses", "going",   "lived",   "data",  "indices", "making", "written"};
  for (const auto& w : words) {
    const std::string once = lemmatize(w);
    EXPECT_EQ(lemmatize(once), once) << w;
    for (char c : once) EXPECT_FALSE(std::isupper(static_cast<unsigned char>(c))) << w;
  }
}

TEST(Normalize, IdempotentOnRandomWords) {
  Rng rng(21);
  const std::string letters = "abcdefghijklmnopqrstuvwxyz";
  const Tokens suffixes{"", "s", "es", "ies", "ing", "ed", "ss", "us"};
  for (int trial = 0; trial < 2000; ++trial) {
    std::string w;
    const auto len = 2 + rng.below(7);
    for (std::size_t i = 0; i < len; ++i) w += letters[rng.below(letters.size())];
    w += suffixes[rng.below(suffixes.size())];
    const std::string once = lemmatize(w);
    ASSERT_EQ(lemmatize(once), once) << w;
  }
}

TEST(BagOfWords, Examples) {
  BagOfWords bag = bag_of_words(with_blob("return nodes;"));
  EXPECT_EQ(bag.method_id, 4u);
  EXPECT_EQ(bag.counts, (std::map<std::string, std::size_t>{{"node", 1}}));
  EXPECT_TRUE(bag_of_words(with_blob("")).empty());
  bag = bag_of_words(with_blob("parse parse"));
  EXPECT_EQ(bag.counts, (std::map<std::string, std::size_t>{{"parse", 2}}));
  EXPECT_EQ(bag.total(), 2u);
}

TEST(BagOfWords, MethodSnippet) {
  const auto bag = bag_of_words(with_blob(R"(
    /** Parses the child nodes of the document. */
    public void parseChildNodes(Document doc) {
      for (Node child : doc.getChildNodes()) { parseNode(child); }
    })"));
  EXPECT_EQ(bag.counts.at("parse"), 3u);
  EXPECT_EQ(bag.counts.at("node"), 5u);
  EXPECT_EQ(bag.counts.at("child"), 5u);
  EXPECT_EQ(bag.counts.at("document"), 2u);
  EXPECT_EQ(bag.counts.at("doc"), 2u);
  EXPECT_FALSE(bag.counts.contains("public"));
  EXPECT_FALSE(bag.counts.contains("the"));
}

TEST(BagOfWords, InvariantsOnRandomBlobs) {
  Rng rng(2);
  const Tokens vocabulary{"the",   "return", "parseNode", "XMLReader", "42", "x", "getChildren", "for",
                          "int",   "while",  "Entries",   "is",        "a",  "runningTotal", "HTTP2Client"};
  const StopwordList& stop = StopwordList::bundled();
  for (int trial = 0; trial < 300; ++trial) {
    std::string blob;
    for (int i = 0; i < 20; ++i) blob += vocabulary[rng.below(vocabulary.size())] + (rng.below(2) ? " " : "_");
    const auto bag = bag_of_words(with_blob(blob));
    EXPECT_EQ(bag, bag_of_words(with_blob(blob)));
    for (const auto& [token, count] : bag.counts) {
      ASSERT_GE(count, 1u);
      ASSERT_FALSE(stop.contains(token)) << token;
      ASSERT_GT(token.size(), 1u);
      ASSERT_FALSE(std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); }));
      for (char c : token) ASSERT_FALSE(std::isupper(static_cast<unsigned char>(c)));
    }
  }
}

TEST(BagOfWords, OnePerMethod) {
  ClassFacts f;
  f.methods = {with_blob("alpha beta"), with_blob("")};
  f.methods[0].id = 0;
  f.methods[1].id = 1;
  const auto bags = bags_of_words(f);
  ASSERT_EQ(bags.size(), 2u);
  EXPECT_EQ(bags[0].method_id, 0u);
  EXPECT_EQ(bags[1].method_id, 1u);
  EXPECT_TRUE(bags[1].empty());
}
