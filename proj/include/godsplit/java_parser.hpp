#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "godsplit/class_facts.hpp"

namespace godsplit {

enum class TokenKind { Identifier, Keyword, Number, String, Char, Punct };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t begin = 0;  // byte offsets into the source
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
  // Offset of the first comment between the previous token and this one, or
  // `begin` when there is none. Lets a member's text include its doc-comment.
  std::size_t leading_begin = 0;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool punct(char c) const { return kind == TokenKind::Punct && text.size() == 1 && text[0] == c; }
  bool keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
};

// Comments are dropped; every operator character is its own Punct token
// (">>" lexes as two '>' so generic closers need no special casing).
// Throws ParseError on unterminated comments or literals.
std::vector<Token> lex_java(std::string_view source);

bool is_java_keyword(std::string_view word);

// The 50 reserved words plus the literals true, false and null.
std::span<const std::string_view> java_keywords();

struct ParseOptions {
  // Drop trivial getters/setters from the model. Calls to a dropped accessor
  // are then counted as external.
  bool exclude_accessors = false;
};

struct ParseReport {
  // One entry per call site recognised in each method (index = method id).
  std::vector<std::size_t> invocation_sites;
  std::size_t initializer_blocks = 0;
  std::size_t nested_types = 0;
  std::size_t skipped_members = 0;
  std::size_t excluded_accessors = 0;
  std::vector<std::string> warnings;

  bool clean() const { return warnings.empty(); }
};

struct ParseResult {
  ClassFacts facts;
  ParseReport report;
};

// Parses one compilation unit holding exactly one top-level class.
// Throws ParseError for malformed input and UnsupportedConstruct when there is
// no top-level class (interfaces and enums alone are rejected).
ParseResult parse_class_with_report(std::string_view source, std::string source_id = {},
                                    const ParseOptions& options = {});

ClassFacts parse_class(std::string_view source, std::string source_id = {},
                       const ParseOptions& options = {});

}  // namespace godsplit
