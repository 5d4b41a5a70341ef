#include "godsplit/java_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "godsplit/error.hpp"

namespace godsplit {

namespace {

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract",   "assert",       "boolean",   "break",      "byte",      "case",
    "catch",      "char",         "class",     "const",      "continue",  "default",
    "do",         "double",       "else",      "enum",       "extends",   "final",
    "finally",    "float",        "for",       "goto",       "if",        "implements",
    "import",     "instanceof",   "int",       "interface",  "long",      "native",
    "new",        "package",      "private",   "protected",  "public",    "return",
    "short",      "static",       "strictfp",  "super",      "switch",    "synchronized",
    "this",       "throw",        "throws",    "transient",  "try",       "void",
    "volatile",   "while",        "true",      "false",      "null"};

constexpr std::array<std::string_view, 8> kPrimitiveTypes = {"boolean", "byte",  "char", "short",
                                                             "int",     "long",  "float", "double"};

constexpr std::array<std::string_view, 12> kModifiers = {
    "public",   "private",      "protected", "static",   "final",    "abstract",
    "native",   "synchronized", "transient", "volatile", "strictfp", "default"};

bool contains(auto const& list, std::string_view word) {
  return std::find(list.begin(), list.end(), word) != list.end();
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) { return ident_start(c) || std::isdigit(c); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      const std::size_t comment_begin = skip_trivia();
      if (pos_ >= src_.size()) break;
      Token t;
      t.begin = pos_;
      t.line = line_;
      t.column = pos_ - line_start_ + 1;
      t.leading_begin = comment_begin;
      const unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (ident_start(c)) {
        while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        t.text = std::string(src_.substr(t.begin, pos_ - t.begin));
        t.kind = is_java_keyword(t.text) ? TokenKind::Keyword : TokenKind::Identifier;
      } else if (std::isdigit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                                     std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number();
        t.kind = TokenKind::Number;
        t.text = std::string(src_.substr(t.begin, pos_ - t.begin));
      } else if (c == '"') {
        lex_quoted('"', t);
        t.kind = TokenKind::String;
        t.text = std::string(src_.substr(t.begin, pos_ - t.begin));
      } else if (c == '\'') {
        lex_quoted('\'', t);
        t.kind = TokenKind::Char;
        t.text = std::string(src_.substr(t.begin, pos_ - t.begin));
      } else {
        ++pos_;
        t.kind = TokenKind::Punct;
        t.text = std::string(1, static_cast<char>(c));
      }
      t.end = pos_;
      out.push_back(std::move(t));
    }
    return out;
  }

 private:
  void advance_newline_aware(std::size_t to) {
    for (; pos_ < to; ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        line_start_ = pos_ + 1;
      }
    }
  }

  // Returns the offset of the first comment skipped, or the offset of the
  // next token when no comment precedes it.
  std::size_t skip_trivia() {
    std::optional<std::size_t> first_comment;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n' || c == ' ' || c == '\t' || c == '\r' || c == '\f') {
        advance_newline_aware(pos_ + 1);
      } else if (src_.substr(pos_, 2) == "//") {
        if (!first_comment) first_comment = pos_;
        const auto eol = src_.find('\n', pos_);
        advance_newline_aware(eol == std::string_view::npos ? src_.size() : eol);
      } else if (src_.substr(pos_, 2) == "/*") {
        if (!first_comment) first_comment = pos_;
        const auto close = src_.find("*/", pos_ + 2);
        if (close == std::string_view::npos)
          throw ParseError("unterminated block comment", line_, pos_ - line_start_ + 1);
        advance_newline_aware(close + 2);
      } else {
        break;
      }
    }
    return first_comment.value_or(pos_);
  }

  void lex_number() {
    while (pos_ < src_.size()) {
      const unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (std::isalnum(c) || c == '_' || c == '.') {
        ++pos_;
        if ((c == 'e' || c == 'E' || c == 'p' || c == 'P') && pos_ < src_.size() &&
            (src_[pos_] == '+' || src_[pos_] == '-'))
          ++pos_;
      } else {
        break;
      }
    }
  }

  void lex_quoted(char quote, const Token& start) {
    if (quote == '"' && src_.substr(pos_, 3) == "\"\"\"") {
      const auto close = src_.find("\"\"\"", pos_ + 3);
      if (close == std::string_view::npos)
        throw ParseError("unterminated text block", start.line, start.column);
      advance_newline_aware(close + 3);
      return;
    }
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
      } else if (c == quote) {
        ++pos_;
        return;
      } else if (c == '\n') {
        break;
      } else {
        ++pos_;
      }
    }
    throw ParseError(quote == '"' ? "unterminated string literal" : "unterminated character literal",
                     start.line, start.column);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

struct MethodDecl {
  std::string name;
  std::size_t arity = 0;
  std::vector<std::string> params;
  std::size_t text_begin = 0;  // byte offsets
  std::size_t text_end = 0;
  // Token range of the body, exclusive of the braces; empty for abstract methods.
  std::size_t body_first = 0;
  std::size_t body_last = 0;
};

class ClassParser {
 public:
  ClassParser(std::string_view source, std::vector<Token> tokens)
      : src_(source), toks_(std::move(tokens)), match_(toks_.size(), kNone) {
    match_brackets();
  }

  ParseResult parse(std::string source_id, const ParseOptions& options) {
    const auto [name, open] = find_top_level_class();
    ParseResult result;
    result.facts.class_name = name;
    result.facts.source_id = std::move(source_id);
    parse_members(open, result);
    analyse_bodies(result);
    if (options.exclude_accessors) drop_accessors(result);
    return result;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  const Token& tok(std::size_t i) const { return toks_[i]; }
  bool valid(std::size_t i) const { return i < toks_.size(); }

  [[noreturn]] void fail(const std::string& what, std::size_t i) const {
    if (i < toks_.size()) throw ParseError(what, toks_[i].line, toks_[i].column);
    const auto& last = toks_.empty() ? Token{} : toks_.back();
    throw ParseError(what, last.line, last.column);
  }

  void match_brackets() {
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      const auto& t = toks_[i];
      if (t.kind != TokenKind::Punct) continue;
      const char c = t.text[0];
      if (c == '(' || c == '{' || c == '[') {
        stack.push_back(i);
      } else if (c == ')' || c == '}' || c == ']') {
        const char want = c == ')' ? '(' : c == '}' ? '{' : '[';
        if (stack.empty()) fail(std::string("unmatched '") + c + "'", i);
        const std::size_t open = stack.back();
        if (toks_[open].text[0] != want)
          fail(std::string("mismatched '") + toks_[open].text + "' closed by '" + c + "'", i);
        stack.pop_back();
        match_[open] = i;
        match_[i] = open;
      }
    }
    if (!stack.empty()) fail("unclosed '" + toks_[stack.back()].text + "'", stack.back());
  }

  // Skips `<...>` starting at i (which must be '<'); returns the index after '>'.
  std::size_t skip_angles(std::size_t i) const {
    int depth = 0;
    for (; valid(i); ++i) {
      if (tok(i).punct('<')) {
        ++depth;
      } else if (tok(i).punct('>')) {
        if (--depth == 0) return i + 1;
      } else if (tok(i).punct('(') || tok(i).punct('{') || tok(i).punct(';')) {
        return i;  // not a type argument list after all
      }
    }
    return i;
  }

  std::size_t skip_annotation(std::size_t i) const {
    // i at '@'
    ++i;
    while (valid(i) && tok(i).kind == TokenKind::Identifier) {
      ++i;
      if (valid(i) && tok(i).punct('.')) {
        ++i;
      } else {
        break;
      }
    }
    if (valid(i) && tok(i).punct('(')) i = match_[i] + 1;
    return i;
  }

  std::size_t skip_to_type_body_end(std::size_t i) const {
    while (valid(i) && !tok(i).punct('{')) {
      if (tok(i).punct(';')) return i + 1;
      ++i;
    }
    if (!valid(i)) fail("type declaration without a body", i - 1);
    return match_[i] + 1;
  }

  std::pair<std::string, std::size_t> find_top_level_class() const {
    std::optional<std::pair<std::string, std::size_t>> found;
    std::size_t other_types = 0;
    std::size_t i = 0;
    while (valid(i)) {
      const auto& t = tok(i);
      if (t.keyword("package") || t.keyword("import")) {
        while (valid(i) && !tok(i).punct(';')) ++i;
        ++i;
      } else if (t.punct('@') && valid(i + 1) && tok(i + 1).keyword("interface")) {
        ++other_types;
        i = skip_to_type_body_end(i + 2);
      } else if (t.punct('@')) {
        i = skip_annotation(i);
      } else if (t.keyword("class")) {
        if (!valid(i + 1) || tok(i + 1).kind != TokenKind::Identifier) fail("expected class name", i + 1);
        std::size_t j = i + 2;
        while (valid(j) && !tok(j).punct('{')) {
          if (tok(j).punct(';')) fail("expected class body", j);
          ++j;
        }
        if (!valid(j)) fail("expected class body", i);
        if (found) throw UnsupportedConstruct("more than one top-level class (second is '" + tok(i + 1).text + "')");
        found = std::make_pair(tok(i + 1).text, j);
        i = match_[j] + 1;
      } else if (t.keyword("interface") || t.keyword("enum")) {
        ++other_types;
        i = skip_to_type_body_end(i + 1);
      } else if (t.punct('{')) {
        fail("unexpected '{' outside a type declaration", i);
      } else {
        ++i;
      }
    }
    if (!found) {
      throw UnsupportedConstruct(other_types > 0 ? "no top-level class found (only interfaces/enums)"
                                                 : "no top-level class found");
    }
    return *found;
  }

  // Index of the first token in [i, end) that is '(' '=' ';' or '{' at this level.
  std::size_t find_declaration_pivot(std::size_t i, std::size_t end) const {
    for (; i < end; ++i) {
      const auto& t = tok(i);
      if (t.punct('(') || t.punct('=') || t.punct(';') || t.punct('{')) return i;
      if (t.punct('[')) i = match_[i];
    }
    return end;
  }

  void parse_members(std::size_t open, ParseResult& result) {
    const std::size_t close = match_[open];
    std::size_t i = open + 1;
    while (i < close) {
      const std::size_t start = i;
      bool is_static = false;
      // annotations and modifiers
      while (i < close) {
        const auto& t = tok(i);
        if (t.punct('@') && !(valid(i + 1) && tok(i + 1).keyword("interface"))) {
          i = skip_annotation(i);
        } else if (t.kind == TokenKind::Keyword && contains(kModifiers, t.text) &&
                   !(t.keyword("static") && valid(i + 1) && tok(i + 1).punct('{'))) {
          is_static = is_static || t.text == "static";
          ++i;
        } else {
          break;
        }
      }
      if (i >= close) break;
      const auto& t = tok(i);
      if (t.punct(';')) {
        ++i;
        continue;
      }
      if (t.punct('{') || (t.keyword("static") && tok(i + 1).punct('{'))) {
        const std::size_t brace = t.punct('{') ? i : i + 1;
        ++result.report.initializer_blocks;
        result.report.warnings.push_back("initializer block at line " + std::to_string(t.line) +
                                         " is not attributed to any method");
        i = match_[brace] + 1;
        continue;
      }
      if (t.keyword("class") || t.keyword("interface") || t.keyword("enum") ||
          (t.punct('@') && tok(i + 1).keyword("interface"))) {
        ++result.report.nested_types;
        result.report.warnings.push_back("nested type at line " + std::to_string(t.line) +
                                         " is outside the class model");
        i = skip_to_type_body_end(i + 1);
        continue;
      }
      if (t.punct('<')) i = skip_angles(i);  // generic method type parameters

      const std::size_t pivot = find_declaration_pivot(i, close);
      if (pivot >= close) fail("incomplete member declaration", start);
      if (tok(pivot).punct('(')) {
        i = parse_method(start, pivot);
      } else if (tok(pivot).punct('=') || tok(pivot).punct(';')) {
        i = parse_field(i, close, is_static, result);
      } else {
        ++result.report.skipped_members;
        result.report.warnings.push_back("unrecognised member at line " + std::to_string(tok(start).line));
        i = match_[pivot] + 1;
      }
    }
  }

  std::size_t parse_method(std::size_t start, std::size_t paren) {
    if (paren == 0 || tok(paren - 1).kind != TokenKind::Identifier) fail("expected method name", paren);
    MethodDecl m;
    m.name = tok(paren - 1).text;
    const std::size_t close = match_[paren];
    m.params = parameter_names(paren + 1, close);
    m.arity = m.params.size();
    std::size_t i = close + 1;
    while (valid(i) && !tok(i).punct('{') && !tok(i).punct(';')) {
      if (tok(i).punct('(') || tok(i).punct('}')) fail("malformed method header", i);
      ++i;
    }
    if (!valid(i)) fail("method '" + m.name + "' has no body", paren);
    m.text_begin = tok(start).leading_begin;
    if (tok(i).punct('{')) {
      m.body_first = i + 1;
      m.body_last = match_[i];
      m.text_end = tok(match_[i]).end;
      i = match_[i] + 1;
    } else {
      m.body_first = m.body_last = i;
      m.text_end = tok(i).end;
      ++i;
    }
    methods_.push_back(std::move(m));
    return i;
  }

  // Declared parameter names in (first, last); generic commas are skipped.
  std::vector<std::string> parameter_names(std::size_t first, std::size_t last) const {
    std::vector<std::string> names;
    int angle = 0;
    std::string last_ident;
    bool any = false;
    for (std::size_t i = first; i < last; ++i) {
      const auto& t = tok(i);
      if (t.punct('@')) {
        i = skip_annotation(i) - 1;
        continue;
      }
      any = true;
      if (t.punct('<')) ++angle;
      else if (t.punct('>')) --angle;
      else if (t.punct(',') && angle == 0) {
        names.push_back(last_ident);
        last_ident.clear();
      } else if (t.kind == TokenKind::Identifier) {
        last_ident = t.text;
      }
    }
    if (any) names.push_back(last_ident);
    return names;
  }

  std::size_t skip_new_type(std::size_t i) const {
    // i just after `new`; skips Type(.Type)*<...> and returns the index of what follows.
    while (valid(i)) {
      if (tok(i).kind == TokenKind::Identifier || tok(i).kind == TokenKind::Keyword || tok(i).punct('.')) {
        ++i;
      } else if (tok(i).punct('<')) {
        i = skip_angles(i);
      } else {
        break;
      }
    }
    return i;
  }

  std::size_t parse_type(std::size_t i) const {
    if (!valid(i) || !(tok(i).kind == TokenKind::Identifier || tok(i).kind == TokenKind::Keyword)) return i;
    ++i;
    while (valid(i)) {
      if (tok(i).punct('<')) {
        i = skip_angles(i);
      } else if (tok(i).punct('.') && valid(i + 1) && tok(i + 1).kind == TokenKind::Identifier) {
        i += 2;
      } else if (tok(i).punct('[') && tok(i + 1).punct(']')) {
        i += 2;
      } else {
        break;
      }
    }
    return i;
  }

  std::size_t parse_field(std::size_t i, std::size_t close, bool is_static, ParseResult& result) {
    i = parse_type(i);
    // declarators
    while (i < close) {
      if (tok(i).kind != TokenKind::Identifier) fail("expected field name", i);
      if (!is_static) result.facts.instance_vars.insert(tok(i).text);
      ++i;
      while (i < close && tok(i).punct('[')) i = match_[i] + 1;
      if (i < close && tok(i).punct('=')) {
        ++i;
        while (i < close && !tok(i).punct(',') && !tok(i).punct(';')) {
          if (tok(i).keyword("new")) {
            i = skip_new_type(i + 1);
            continue;
          }
          if (tok(i).punct('(') || tok(i).punct('{') || tok(i).punct('[')) i = match_[i];
          ++i;
        }
      }
      if (i >= close) fail("unterminated field declaration", i);
      if (tok(i).punct(';')) return i + 1;
      ++i;  // ','
    }
    fail("unterminated field declaration", i);
  }

  std::optional<MethodId> resolve(const std::string& name, std::size_t arity, ParseResult& result) const {
    std::optional<MethodId> hit;
    for (std::size_t k = 0; k < methods_.size(); ++k) {
      if (methods_[k].name == name && methods_[k].arity == arity) {
        if (!hit) {
          hit = k;
        } else {
          result.report.warnings.push_back("ambiguous overload " + name + "/" + std::to_string(arity) +
                                           "; resolved to the first declaration");
          break;
        }
      }
    }
    return hit;
  }

  std::size_t count_arguments(std::size_t paren) const {
    const std::size_t close = match_[paren];
    if (close == paren + 1) return 0;
    std::size_t commas = 0;
    for (std::size_t i = paren + 1; i < close; ++i) {
      const auto& t = tok(i);
      if (t.keyword("new")) {
        i = skip_new_type(i + 1) - 1;
      } else if (t.punct('(') || t.punct('{') || t.punct('[')) {
        i = match_[i];
      } else if (t.punct(',')) {
        ++commas;
      }
    }
    return commas + 1;
  }

  bool is_type_end(std::size_t i) const {
    const auto& t = tok(i);
    if (t.kind == TokenKind::Identifier) return true;
    if (t.kind == TokenKind::Keyword) return contains(kPrimitiveTypes, t.text) || t.text == "void";
    if (t.punct(']')) return i > 0 && tok(i - 1).punct('[');
    if (t.punct('>')) {
      // Walk back to the matching '<'; only type-argument tokens may appear.
      int depth = 0;
      for (std::size_t k = i + 1; k-- > 0;) {
        const auto& u = tok(k);
        if (u.punct('>')) {
          ++depth;
        } else if (u.punct('<')) {
          if (--depth == 0) return k > 0 && tok(k - 1).kind == TokenKind::Identifier;
        } else if (!(u.kind == TokenKind::Identifier || u.punct('.') || u.punct(',') || u.punct('?') ||
                     u.punct('[') || u.punct(']') || u.keyword("extends") || u.keyword("super") ||
                     (u.kind == TokenKind::Keyword && contains(kPrimitiveTypes, u.text)))) {
          return false;
        }
      }
    }
    return false;
  }

  static bool declarator_follower(const Token& t) {
    return t.punct('=') || t.punct(';') || t.punct(',') || t.punct(':') || t.punct(')') || t.punct('[');
  }

  void analyse_bodies(ParseResult& result) {
    auto& facts = result.facts;
    facts.methods.resize(methods_.size());
    result.report.invocation_sites.assign(methods_.size(), 0);
    for (std::size_t id = 0; id < methods_.size(); ++id) {
      const auto& decl = methods_[id];
      auto& m = facts.methods[id];
      m.id = id;
      m.name = decl.name;
      m.arity = decl.arity;
      m.text_blob = std::string(src_.substr(decl.text_begin, decl.text_end - decl.text_begin));
      analyse_body(decl, m, result.report.invocation_sites[id], result);
    }
  }

  void record_call(MethodFacts& m, std::optional<MethodId> callee, std::size_t& sites) const {
    ++sites;
    if (callee) {
      ++m.internal_calls[*callee];
    } else {
      ++m.external_call_count;
    }
  }

  void analyse_body(const MethodDecl& decl, MethodFacts& m, std::size_t& sites, ParseResult& result) {
    const auto& fields = result.facts.instance_vars;
    std::vector<std::set<std::string>> scopes(1);
    for (const auto& p : decl.params) scopes[0].insert(p);
    std::vector<std::string> pending;  // declared inside parentheses
    int paren_depth = 0;
    std::optional<int> declaring_at;  // paren depth of an open declaration statement

    auto shadowed = [&](const std::string& name) {
      if (std::find(pending.begin(), pending.end(), name) != pending.end()) return true;
      return std::any_of(scopes.begin(), scopes.end(), [&](const auto& s) { return s.contains(name); });
    };
    auto declare = [&](const std::string& name) {
      if (paren_depth > 0) {
        pending.push_back(name);
      } else {
        scopes.back().insert(name);
      }
      declaring_at = paren_depth;
    };

    for (std::size_t i = decl.body_first; i < decl.body_last; ++i) {
      const auto& t = tok(i);
      const Token* prev = i > decl.body_first ? &tok(i - 1) : nullptr;
      if (t.kind == TokenKind::Punct) {
        switch (t.text[0]) {
          case '{':
            if (prev && prev->punct(')')) {
              scopes.emplace_back(pending.begin(), pending.end());
            } else {
              scopes.back().insert(pending.begin(), pending.end());
              scopes.emplace_back();
            }
            pending.clear();
            declaring_at.reset();
            break;
          case '}':
            if (scopes.size() > 1) scopes.pop_back();
            declaring_at.reset();
            break;
          case '(':
            ++paren_depth;
            break;
          case ')':
            --paren_depth;
            if (declaring_at && *declaring_at > paren_depth) declaring_at.reset();
            break;
          case ';':
            if (paren_depth == 0) {
              scopes.back().insert(pending.begin(), pending.end());
              pending.clear();
              declaring_at.reset();
            } else if (declaring_at && *declaring_at == paren_depth) {
              declaring_at.reset();
            }
            break;
          default:
            break;
        }
        continue;
      }
      if (t.keyword("new")) {
        // The created type is neither a call nor a field; arguments are scanned normally.
        i = skip_new_type(i + 1) - 1;
        continue;
      }
      if ((t.keyword("this") || t.keyword("super")) && tok(i + 1).punct('(') &&
          !(prev && prev->punct('.'))) {
        std::optional<MethodId> callee;
        if (t.text == "this") callee = resolve(result.facts.class_name, count_arguments(i + 1), result);
        record_call(m, callee, sites);
        continue;
      }
      if (t.kind != TokenKind::Identifier) continue;

      const Token& next = tok(i + 1);
      const bool after_type = prev && is_type_end(i - 1);
      if (next.punct('(')) {
        if (after_type || (prev && prev->punct('@'))) continue;  // local/anonymous method declaration or annotation
        std::optional<MethodId> callee;
        const bool qualified = prev && prev->punct('.');
        const bool via_this = qualified && i >= decl.body_first + 2 && tok(i - 2).keyword("this") &&
                              !(i >= decl.body_first + 3 && tok(i - 3).punct('.'));
        if (!qualified || via_this) callee = resolve(t.text, count_arguments(i + 1), result);
        record_call(m, callee, sites);
        continue;
      }
      if (after_type && declarator_follower(next)) {
        declare(t.text);
        continue;
      }
      if (declaring_at && *declaring_at == paren_depth && prev && prev->punct(',') &&
          (next.punct('=') || next.punct(',') || next.punct(';') || next.punct('['))) {
        declare(t.text);
        continue;
      }
      if (!fields.contains(t.text)) continue;
      if (prev && (prev->keyword("break") || prev->keyword("continue"))) continue;
      if (prev && prev->punct('.')) {
        const bool via_this = i >= decl.body_first + 2 && tok(i - 2).keyword("this") &&
                              !(i >= decl.body_first + 3 && tok(i - 3).punct('.'));
        if (via_this) m.accessed_vars.insert(t.text);
        continue;
      }
      if (!shadowed(t.text)) m.accessed_vars.insert(t.text);
    }
  }

  // `{ return f; }`, `{ return this.f; }`, `{ f = p; }`, `{ this.f = p; }`
  bool is_accessor(const MethodDecl& d, const std::set<std::string>& fields) const {
    const bool named = (d.name.size() > 3 && (d.name.starts_with("get") || d.name.starts_with("set")) &&
                        std::isupper(static_cast<unsigned char>(d.name[3]))) ||
                       (d.name.size() > 2 && d.name.starts_with("is") &&
                        std::isupper(static_cast<unsigned char>(d.name[2])));
    if (!named || d.body_first >= d.body_last) return false;
    std::vector<const Token*> body;
    for (std::size_t i = d.body_first; i < d.body_last; ++i) body.push_back(&tok(i));
    std::size_t k = 0;
    auto field_ref = [&]() {
      if (k + 2 < body.size() && body[k]->keyword("this") && body[k + 1]->punct('.')) k += 2;
      if (k < body.size() && body[k]->kind == TokenKind::Identifier && fields.contains(body[k]->text)) {
        ++k;
        return true;
      }
      return false;
    };
    if (body[0]->keyword("return")) {
      k = 1;
      return field_ref() && k + 1 == body.size() && body[k]->punct(';');
    }
    return field_ref() && k + 3 == body.size() && body[k]->punct('=') &&
           body[k + 1]->kind == TokenKind::Identifier && body[k + 2]->punct(';');
  }

  void drop_accessors(ParseResult& result) {
    const auto& fields = result.facts.instance_vars;
    std::vector<std::optional<MethodId>> remap(methods_.size());
    std::vector<MethodFacts> kept;
    std::vector<std::size_t> kept_sites;
    for (std::size_t id = 0; id < methods_.size(); ++id) {
      if (is_accessor(methods_[id], fields)) {
        ++result.report.excluded_accessors;
        continue;
      }
      remap[id] = kept.size();
      kept.push_back(std::move(result.facts.methods[id]));
      kept_sites.push_back(result.report.invocation_sites[id]);
    }
    for (std::size_t k = 0; k < kept.size(); ++k) {
      auto& m = kept[k];
      m.id = k;
      std::map<MethodId, std::size_t> calls;
      for (const auto& [callee, count] : m.internal_calls) {
        if (remap[callee]) {
          calls[*remap[callee]] += count;
        } else {
          m.external_call_count += count;
        }
      }
      m.internal_calls = std::move(calls);
    }
    result.facts.methods = std::move(kept);
    result.report.invocation_sites = std::move(kept_sites);
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::vector<std::size_t> match_;
  std::vector<MethodDecl> methods_;
};

}  // namespace

bool is_java_keyword(std::string_view word) { return contains(kKeywords, word); }

std::span<const std::string_view> java_keywords() { return kKeywords; }

std::vector<Token> lex_java(std::string_view source) { return Lexer(source).run(); }

ParseResult parse_class_with_report(std::string_view source, std::string source_id,
                                    const ParseOptions& options) {
  auto tokens = lex_java(source);
  // Sentinel so lookahead by one is always in range.
  Token eof;
  eof.kind = TokenKind::Punct;
  eof.text = std::string(1, '\0');
  eof.begin = eof.end = eof.leading_begin = source.size();
  if (!tokens.empty()) {
    eof.line = tokens.back().line;
    eof.column = tokens.back().column;
  }
  tokens.push_back(eof);
  ClassParser parser(source, std::move(tokens));
  return parser.parse(std::move(source_id), options);
}

ClassFacts parse_class(std::string_view source, std::string source_id, const ParseOptions& options) {
  return parse_class_with_report(source, std::move(source_id), options).facts;
}

}  // namespace godsplit
