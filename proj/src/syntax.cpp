#include "stylo/syntax.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace stylo {

namespace {

const std::set<std::string>& type_start_keywords() {
  static const std::set<std::string> kw = {
      "auto",     "bool",     "boolean",  "byte",     "char",   "char8_t",
      "char16_t", "char32_t", "const",    "constexpr", "double", "extern",
      "final",    "float",    "int",      "long",     "register", "short",
      "signed",   "static",   "template", "typedef",  "typename", "unsigned",
      "using",    "void",     "volatile", "wchar_t"};
  return kw;
}

const std::set<std::string>& class_keywords() {
  static const std::set<std::string> kw = {"class", "struct", "interface",
                                           "enum", "union"};
  return kw;
}

// Statements starting with these never introduce a function definition.
const std::set<std::string>& head_guard_keywords() {
  static const std::set<std::string> kw = {"new", "return", "throw", "delete"};
  return kw;
}

const std::set<std::string>& assign_ops() {
  static const std::set<std::string> ops = {"=",  "+=", "-=",  "*=",  "/=", "%=",
                                            "&=", "|=", "^=",  "<<=", ">>=",
                                            ">>>="};
  return ops;
}

const std::set<std::string>& binary_ops() {
  static const std::set<std::string> ops = {
      "||", "&&", "|",  "^",  "&",  "==", "!=", "<=", ">=",
      "<",  ">",  "<<", ">>", ">>>", "+",  "-",  "*",  "/",  "%"};
  return ops;
}

const std::set<std::string>& unary_ops() {
  static const std::set<std::string> ops = {"!", "~", "++", "--", "-", "+", "*", "&"};
  return ops;
}

bool is_operator_like(const Token& t) {
  if (t.kind != TokenKind::Punctuation) return false;
  return assign_ops().count(t.text) || binary_ops().count(t.text) ||
         unary_ops().count(t.text) || t.text == "(" || t.text == "[" ||
         t.text == "{" || t.text == "," || t.text == "?" || t.text == ":" ||
         t.text == ";";
}

class Parser {
 public:
  explicit Parser(const TokenStream& stream) {
    for (const Token& t : stream.tokens) {
      if (t.kind == TokenKind::Whitespace || t.kind == TokenKind::Comment ||
          t.kind == TokenKind::Macro) {
        continue;  // structure lives in the remaining tokens
      }
      sig_.push_back(&t);
    }
  }

  SyntaxTree run() {
    SyntaxTree tree;
    tree.root = std::make_unique<SyntaxNode>(NodeType::TranslationUnit);
    pos_ = 0;
    parse_statements(tree.root.get(), sig_.size(), /*allow_function=*/true,
                     /*stop_at_rbrace=*/false);
    tree.diagnostics = std::move(diagnostics_);
    tree.node_count = count_nodes(tree.root.get());
    return tree;
  }

 private:
  // ---- token helpers -------------------------------------------------

  const Token& tok(std::size_t i) const { return *sig_[i]; }

  bool is_punct(std::size_t i, const char* text) const {
    return i < sig_.size() && sig_[i]->kind == TokenKind::Punctuation &&
           sig_[i]->text == text;
  }

  bool is_kw(std::size_t i, const char* text) const {
    return i < sig_.size() && sig_[i]->kind == TokenKind::Keyword &&
           sig_[i]->text == text;
  }

  bool is_kind(std::size_t i, TokenKind k) const {
    return i < sig_.size() && sig_[i]->kind == k;
  }

  static int open_delta(const Token& t) {
    if (t.kind != TokenKind::Punctuation) return 0;
    if (t.text == "(" || t.text == "[" || t.text == "{") return 1;
    if (t.text == ")" || t.text == "]" || t.text == "}") return -1;
    return 0;
  }

  // Index of the closer matching the opener at `open`, or `limit` when the
  // group never closes (tolerated; the group then runs to the limit).
  std::size_t find_close(std::size_t open, std::size_t limit) const {
    int depth = 0;
    for (std::size_t i = open; i < limit && i < sig_.size(); ++i) {
      depth += open_delta(tok(i));
      if (depth == 0) return i;
    }
    return std::min(limit, sig_.size());
  }

  // find_close that also reports a never-closing group.
  std::size_t find_close_diag(std::size_t open, std::size_t limit) {
    std::size_t close = find_close(open, limit);
    if (close == std::min(limit, sig_.size())) {
      diag("unmatched opening delimiter", sig_[open]);
    }
    return close;
  }

  // Matching opener for the closer at `close`, or `close` when unmatched.
  std::size_t match_backward(std::size_t begin, std::size_t close) const {
    int depth = 0;
    for (std::size_t i = close + 1; i-- > begin;) {
      depth += open_delta(tok(i));
      if (depth == 0) return i;
    }
    return close;
  }

  void diag(const char* msg, const Token* at) {
    Diagnostic d;
    d.message = msg;
    if (at) {
      d.line = at->line;
      d.column = at->column;
    }
    diagnostics_.push_back(std::move(d));
  }

  static std::size_t count_nodes(const SyntaxNode* n) {
    std::size_t c = 1;
    for (const auto& ch : n->children) c += count_nodes(ch.get());
    return c;
  }

  // ---- statements -----------------------------------------------------

  void parse_statements(SyntaxNode* parent, std::size_t limit, bool allow_function,
                        bool stop_at_rbrace) {
    while (pos_ < limit && pos_ < sig_.size()) {
      if (is_punct(pos_, "}")) {
        if (stop_at_rbrace) return;
        diag("unmatched closing brace", sig_[pos_]);
        ++pos_;
        continue;
      }
      parse_statement(parent, limit, allow_function);
    }
  }

  void parse_statement(SyntaxNode* parent, std::size_t limit, bool allow_function) {
    const Token& t = tok(pos_);
    if (t.kind == TokenKind::Punctuation) {
      if (t.text == ";") {
        ++pos_;
        return;
      }
      if (t.text == "{") {
        parse_block(parent, limit, /*allow_function=*/false);
        return;
      }
      if ((t.text == "<" || t.text == "\"") && is_kind(pos_ + 1, TokenKind::ImportName)) {
        // #include <name> / #include "name": the marker itself was a Macro
        // token, so only the delimiters and the name reach the parser.
        ++pos_;
        parent->add_child(NodeType::Import);
        ++pos_;
        if (is_punct(pos_, ">") || is_punct(pos_, "\"")) ++pos_;
        return;
      }
      if (t.text == ")" || t.text == "]") {
        diag("unmatched closing delimiter", sig_[pos_]);
        ++pos_;
        return;
      }
      parse_mixed(parent, limit, allow_function);
      return;
    }
    if (t.kind == TokenKind::ImportName) {
      parent->add_child(NodeType::Import);
      ++pos_;
      return;
    }
    if (t.kind == TokenKind::Keyword) {
      const std::string& kw = t.text;
      if (kw == "if") {
        parse_if(parent, limit);
        return;
      }
      if (kw == "for") {
        parse_for(parent, limit);
        return;
      }
      if (kw == "while") {
        parse_while(parent, limit);
        return;
      }
      if (kw == "do") {
        parse_do(parent, limit);
        return;
      }
      if (kw == "switch") {
        parse_switch(parent, limit);
        return;
      }
      if (kw == "case" || kw == "default") {
        parse_case(parent, limit);
        return;
      }
      if (kw == "return") {
        ++pos_;
        SyntaxNode* node = parent->add_child(NodeType::Return);
        std::size_t end = find_statement_end(pos_, limit);
        parse_expression(node, pos_, end);
        pos_ = end;
        if (is_punct(pos_, ";")) ++pos_;
        return;
      }
      if (kw == "break" || kw == "continue" || kw == "goto") {
        parent->add_child(NodeType::Other);
        pos_ = find_statement_end(pos_, limit);
        if (is_punct(pos_, ";")) ++pos_;
        return;
      }
      if (kw == "throw") {
        ++pos_;
        SyntaxNode* node = parent->add_child(NodeType::Other);
        std::size_t end = find_statement_end(pos_, limit);
        parse_expression(node, pos_, end);
        pos_ = end;
        if (is_punct(pos_, ";")) ++pos_;
        return;
      }
      if (kw == "try" || kw == "catch" || kw == "finally" || kw == "synchronized") {
        ++pos_;
        SyntaxNode* node = parent->add_child(NodeType::Other);
        if (is_punct(pos_, "(")) pos_ = after_close(find_close_diag(pos_, limit), limit);
        if (is_punct(pos_, "{")) parse_block(node, limit, /*allow_function=*/false);
        return;
      }
      if (kw == "else") {
        // orphan else: tolerated, body still parsed
        ++pos_;
        SyntaxNode* node = parent->add_child(NodeType::Other);
        parse_embedded_block(node, limit);
        return;
      }
      if (class_keywords().count(kw)) {
        parse_class(parent, limit);
        return;
      }
      if (kw == "namespace") {
        parse_namespace(parent, limit);
        return;
      }
      if (kw == "import") {
        parse_import_statement(parent, limit);
        return;
      }
    }
    parse_mixed(parent, limit, allow_function);
  }

  // Always materializes a Block for a control-structure body so braced and
  // single-statement bodies produce the same shape.
  void parse_embedded_block(SyntaxNode* parent, std::size_t limit) {
    if (is_punct(pos_, "{")) {
      parse_block(parent, limit, /*allow_function=*/false);
      return;
    }
    SyntaxNode* block = parent->add_child(NodeType::Block);
    if (pos_ >= limit || pos_ >= sig_.size()) return;
    if (is_punct(pos_, ";")) {
      ++pos_;
      return;
    }
    if (is_punct(pos_, "}")) return;
    parse_statement(block, limit, /*allow_function=*/false);
  }

  // Index to resume at after a group whose closer is `close`: past the
  // closer when it exists, at the boundary when the group never closed.
  std::size_t after_close(std::size_t close, std::size_t limit) const {
    return close < std::min(limit, sig_.size()) ? close + 1 : close;
  }

  void parse_block(SyntaxNode* parent, std::size_t limit, bool allow_function) {
    SyntaxNode* block = parent->add_child(NodeType::Block);
    std::size_t close = find_close_diag(pos_, limit);
    ++pos_;  // consume '{'
    parse_statements(block, close, allow_function, /*stop_at_rbrace=*/true);
    pos_ = after_close(close, limit);
  }

  void parse_if(SyntaxNode* parent, std::size_t limit) {
    SyntaxNode* node = parent->add_child(NodeType::If);
    ++pos_;
    if (is_kw(pos_, "constexpr")) ++pos_;
    parse_paren_condition(node, limit);
    parse_embedded_block(node, limit);
    if (is_kw(pos_, "else")) {
      ++pos_;
      SyntaxNode* els = node->add_child(NodeType::Else);
      if (is_kw(pos_, "if")) {
        parse_if(els, limit);  // else-if chains hang the If directly off Else
      } else {
        parse_embedded_block(els, limit);
      }
    }
  }

  void parse_paren_condition(SyntaxNode* node, std::size_t limit) {
    if (!is_punct(pos_, "(")) return;
    std::size_t close = find_close_diag(pos_, limit);
    parse_expression(node, pos_ + 1, close);
    pos_ = after_close(close, limit);
  }

  void parse_for(SyntaxNode* parent, std::size_t limit) {
    SyntaxNode* node = parent->add_child(NodeType::For);
    ++pos_;
    if (is_punct(pos_, "(")) {
      std::size_t close = find_close_diag(pos_, limit);
      std::size_t b = pos_ + 1;
      auto parts = split_top_level(b, close, ";");
      if (parts.size() >= 2) {
        if (parts[0].first < parts[0].second) {
          parse_simple_range(node, parts[0].first, parts[0].second);
        }
        for (std::size_t k = 1; k < parts.size(); ++k) {
          parse_expression(node, parts[k].first, parts[k].second);
        }
      } else {
        // range / enhanced for: `type name : sequence`
        auto colon = split_top_level(b, close, ":");
        if (colon.size() == 2) {
          if (colon[0].first < colon[0].second) {
            parse_simple_range(node, colon[0].first, colon[0].second);
          }
          parse_expression(node, colon[1].first, colon[1].second);
        } else {
          parse_expression(node, b, close);
        }
      }
      pos_ = after_close(close, limit);
    }
    parse_embedded_block(node, limit);
  }

  void parse_while(SyntaxNode* parent, std::size_t limit) {
    SyntaxNode* node = parent->add_child(NodeType::While);
    ++pos_;
    parse_paren_condition(node, limit);
    parse_embedded_block(node, limit);
  }

  void parse_do(SyntaxNode* parent, std::size_t limit) {
    SyntaxNode* node = parent->add_child(NodeType::DoWhile);
    ++pos_;
    parse_embedded_block(node, limit);
    if (is_kw(pos_, "while")) {
      ++pos_;
      parse_paren_condition(node, limit);
    }
    if (is_punct(pos_, ";")) ++pos_;
  }

  void parse_switch(SyntaxNode* parent, std::size_t limit) {
    SyntaxNode* node = parent->add_child(NodeType::Switch);
    ++pos_;
    parse_paren_condition(node, limit);
    if (is_punct(pos_, "{")) {
      parse_block(node, limit, /*allow_function=*/false);
    }
  }

  void parse_case(SyntaxNode* parent, std::size_t limit) {
    bool is_default = tok(pos_).text == "default";
    SyntaxNode* node = parent->add_child(NodeType::Case);
    ++pos_;
    std::size_t end = pos_;
    int depth = 0;
    while (end < limit && end < sig_.size()) {
      const Token& t = tok(end);
      depth += open_delta(t);
      if (depth < 0) break;
      if (depth == 0 && t.kind == TokenKind::Punctuation &&
          (t.text == ":" || t.text == ";")) {
        break;
      }
      ++end;
    }
    if (!is_default) parse_expression(node, pos_, end);
    pos_ = end;
    if (is_punct(pos_, ":") || is_punct(pos_, ";")) ++pos_;
  }

  void parse_class(SyntaxNode* parent, std::size_t limit) {
    SyntaxNode* node = parent->add_child(NodeType::Class);
    ++pos_;
    int depth = 0;
    while (pos_ < limit && pos_ < sig_.size()) {
      const Token& t = tok(pos_);
      if (depth == 0 && t.kind == TokenKind::Punctuation &&
          (t.text == "{" || t.text == ";" || t.text == "}")) {
        break;
      }
      depth += open_delta(t);
      ++pos_;
    }
    if (is_punct(pos_, ";")) {
      ++pos_;  // forward declaration
      return;
    }
    if (is_punct(pos_, "{")) {
      std::size_t close = find_close_diag(pos_, limit);
      ++pos_;
      parse_statements(node, close, /*allow_function=*/true, /*stop_at_rbrace=*/true);
      pos_ = after_close(close, limit);
    }
  }

  void parse_namespace(SyntaxNode* parent, std::size_t limit) {
    SyntaxNode* node = parent->add_child(NodeType::Other);
    ++pos_;
    while (pos_ < limit && pos_ < sig_.size() && !is_punct(pos_, "{") &&
           !is_punct(pos_, ";") && !is_punct(pos_, "}")) {
      ++pos_;
    }
    if (is_punct(pos_, ";")) {
      ++pos_;
      return;
    }
    if (is_punct(pos_, "{")) {
      std::size_t close = find_close_diag(pos_, limit);
      ++pos_;
      parse_statements(node, close, /*allow_function=*/true, /*stop_at_rbrace=*/true);
      pos_ = after_close(close, limit);
    }
  }

  void parse_import_statement(SyntaxNode* parent, std::size_t limit) {
    std::uint32_t line = tok(pos_).line;
    ++pos_;
    while (pos_ < limit && pos_ < sig_.size() && tok(pos_).line == line) {
      if (is_punct(pos_, ";")) {
        ++pos_;
        break;
      }
      ++pos_;
    }
    parent->add_child(NodeType::Import);
  }

  std::size_t find_statement_end(std::size_t from, std::size_t limit) const {
    int depth = 0;
    for (std::size_t i = from; i < limit && i < sig_.size(); ++i) {
      const Token& t = tok(i);
      if (depth == 0 && t.kind == TokenKind::Punctuation &&
          (t.text == ";" || t.text == "}")) {
        return i;
      }
      depth += open_delta(t);
      if (depth < 0) return i;
    }
    return std::min(limit, sig_.size());
  }

  // Anything not keyword-anchored: declarations, expression statements,
  // function definitions, stray braced constructs.
  void parse_mixed(SyntaxNode* parent, std::size_t limit, bool allow_function) {
    std::size_t start = pos_;
    std::size_t i = pos_;
    bool saw_assign = false;
    bool saw_class_kw = false;
    while (i < limit && i < sig_.size()) {
      const Token& t = tok(i);
      if (t.kind == TokenKind::Keyword && class_keywords().count(t.text)) {
        saw_class_kw = true;
      }
      if (t.kind == TokenKind::Punctuation) {
        if (t.text == ";") {
          parse_simple_range(parent, start, i);
          pos_ = i + 1;
          return;
        }
        if (t.text == "}") {
          parse_simple_range(parent, start, i);
          pos_ = i;
          return;
        }
        if (t.text == "(" || t.text == "[") {
          i = after_close(find_close_diag(i, limit), limit);
          continue;
        }
        if (t.text == "=") saw_assign = true;
        if (t.text == "{") {
          // `= {...}` initializers and `name{...}` uniform-init are part of
          // the statement, not a body; a type-definition head is neither
          bool init_continuation =
              !saw_class_kw &&
              (saw_assign || (i > start && tok(i - 1).kind == TokenKind::Identifier));
          if (init_continuation) {
            i = after_close(find_close_diag(i, limit), limit);
            continue;
          }
          decide_braced(parent, start, i, limit, allow_function);
          return;
        }
      }
      ++i;
    }
    parse_simple_range(parent, start, std::min(limit, sig_.size()));
    pos_ = std::min(limit, sig_.size());
  }

  // A '{' was reached with a non-initializer prefix [start, brace).
  void decide_braced(SyntaxNode* parent, std::size_t start, std::size_t brace,
                     std::size_t limit, bool allow_function) {
    if (brace == start) {
      pos_ = brace;
      parse_block(parent, limit, /*allow_function=*/false);
      return;
    }
    bool has_class_kw = false;
    bool has_guard_kw = false;
    std::size_t first_group_open = sig_.size();
    std::size_t first_group_close = sig_.size();
    int depth = 0;
    for (std::size_t i = start; i < brace; ++i) {
      const Token& t = tok(i);
      if (depth == 0 && t.kind == TokenKind::Keyword) {
        if (class_keywords().count(t.text)) has_class_kw = true;
        if (head_guard_keywords().count(t.text)) has_guard_kw = true;
      }
      if (depth == 0 && t.kind == TokenKind::Punctuation && t.text == "(" &&
          first_group_open == sig_.size()) {
        first_group_open = i;
        first_group_close = find_close(i, brace);
      }
      depth += open_delta(t);
    }

    if (has_class_kw && first_group_open == sig_.size()) {
      // templated or typedef'd type definition; body is class-like scope
      SyntaxNode* node = parent->add_child(NodeType::Class);
      pos_ = brace;
      std::size_t close = find_close_diag(pos_, limit);
      ++pos_;
      parse_statements(node, close, /*allow_function=*/true, /*stop_at_rbrace=*/true);
      pos_ = after_close(close, limit);
      return;
    }

    bool head_ok = allow_function && !has_guard_kw &&
                   first_group_open != sig_.size() && first_group_open > start &&
                   tok(first_group_open - 1).kind == TokenKind::Identifier;
    if (head_ok) {
      SyntaxNode* fn = parent->add_child(NodeType::Function);
      SyntaxNode* params = fn->add_child(NodeType::ParameterList);
      parse_parameters(params, first_group_open + 1, first_group_close);
      pos_ = brace;
      parse_block(fn, limit, /*allow_function=*/false);
      return;
    }

    // Unrecognized braced construct (extern "C", static init blocks, ...).
    SyntaxNode* node = parent->add_child(NodeType::Other);
    pos_ = brace;
    parse_block(node, limit, allow_function);
  }

  void parse_parameters(SyntaxNode* params, std::size_t b, std::size_t e) {
    if (b >= e) return;
    for (auto [fb, fe] : split_top_level(b, e, ",")) {
      if (fb >= fe) continue;
      if (fe - fb == 1 && is_kw(fb, "void")) continue;  // f(void) has no params
      params->add_child(NodeType::Parameter);
    }
  }

  // ---- declarations and expressions ------------------------------------

  std::vector<std::pair<std::size_t, std::size_t>> split_top_level(
      std::size_t b, std::size_t e, const char* sep) const {
    std::vector<std::pair<std::size_t, std::size_t>> parts;
    e = std::min(e, sig_.size());
    int depth = 0;
    std::size_t frag = b;
    for (std::size_t i = b; i < e; ++i) {
      const Token& t = tok(i);
      if (depth == 0 && t.kind == TokenKind::Punctuation && t.text == sep) {
        parts.emplace_back(frag, i);
        frag = i + 1;
        continue;
      }
      depth += open_delta(t);
    }
    parts.emplace_back(frag, e);
    return parts;
  }

  bool contains_import(std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i < e; ++i) {
      if (tok(i).kind == TokenKind::ImportName) return true;
    }
    return false;
  }

  // Declaration-vs-expression heuristic for a delimiter-free range.
  void parse_simple_range(SyntaxNode* parent, std::size_t b, std::size_t e) {
    e = std::min(e, sig_.size());
    if (b >= e) return;
    if (contains_import(b, e)) {
      parent->add_child(NodeType::Import);
      return;
    }
    bool decl = false;
    const Token& first = tok(b);
    if (first.kind == TokenKind::Keyword && type_start_keywords().count(first.text)) {
      decl = true;
    }
    if (!decl) {
      int depth = 0;
      bool saw_assign = false;
      for (std::size_t i = b; i + 1 < e; ++i) {
        const Token& t = tok(i);
        if (depth == 0 && t.kind == TokenKind::Punctuation && assign_ops().count(t.text)) {
          saw_assign = true;
        }
        if (depth == 0) {
          const Token& n = tok(i + 1);
          bool t_namey = t.kind == TokenKind::Identifier ||
                         (t.kind == TokenKind::Keyword && type_start_keywords().count(t.text));
          if (t_namey && n.kind == TokenKind::Identifier) {
            decl = true;
            break;
          }
          if (t.kind == TokenKind::Punctuation && t.text == ">" &&
              n.kind == TokenKind::Identifier && !saw_assign &&
              first.kind == TokenKind::Identifier) {
            decl = true;  // Foo<Bar> name
            break;
          }
        }
        depth += open_delta(t);
      }
    }
    if (decl) {
      parse_declaration(parent, b, e);
    } else {
      parse_expression(parent, b, e);
    }
  }

  void parse_declaration(SyntaxNode* parent, std::size_t b, std::size_t e) {
    SyntaxNode* node = parent->add_child(NodeType::Declaration);
    for (auto [fb, fe] : split_top_level(b, e, ",")) {
      if (fb >= fe) continue;
      int depth = 0;
      bool handled = false;
      for (std::size_t i = fb; i < fe; ++i) {
        const Token& t = tok(i);
        if (depth == 0 && t.kind == TokenKind::Punctuation && t.text == "=") {
          parse_expression(node, i + 1, fe);
          handled = true;
          break;
        }
        depth += open_delta(t);
      }
      if (handled) continue;
      depth = 0;
      for (std::size_t i = fb; i < fe; ++i) {
        const Token& t = tok(i);
        if (depth == 0 && t.kind == TokenKind::Punctuation && t.text == "{") {
          std::size_t close = find_close(i, fe);
          parse_brace_group(node, i + 1, close);
          i = close;
          continue;
        }
        depth += open_delta(t);
      }
    }
  }

  // `{...}` content: statement block when it has top-level semicolons,
  // otherwise an initializer list of expressions.
  void parse_brace_group(SyntaxNode* parent, std::size_t b, std::size_t e) {
    SyntaxNode* block = parent->add_child(NodeType::Block);
    e = std::min(e, sig_.size());
    bool has_semi = false;
    int depth = 0;
    for (std::size_t i = b; i < e; ++i) {
      const Token& t = tok(i);
      if (depth == 0 && t.kind == TokenKind::Punctuation && t.text == ";") {
        has_semi = true;
        break;
      }
      depth += open_delta(t);
    }
    if (has_semi) {
      std::size_t save = pos_;
      pos_ = b;
      parse_statements(block, e, /*allow_function=*/false, /*stop_at_rbrace=*/true);
      pos_ = save;
    } else if (b < e) {
      for (auto [fb, fe] : split_top_level(b, e, ",")) {
        parse_expression(block, fb, fe);
      }
    }
  }

  void parse_expression(SyntaxNode* parent, std::size_t b, std::size_t e) {
    e = std::min(e, sig_.size());
    if (b >= e) return;

    auto fragments = split_top_level(b, e, ",");
    if (fragments.size() > 1) {
      for (auto [fb, fe] : fragments) parse_expression(parent, fb, fe);
      return;
    }

    // ternary
    {
      int depth = 0;
      for (std::size_t i = b; i < e; ++i) {
        const Token& t = tok(i);
        if (depth == 0 && t.kind == TokenKind::Punctuation && t.text == "?") {
          std::size_t colon = find_ternary_colon(i + 1, e);
          if (colon < e) {
            SyntaxNode* node = parent->add_child(NodeType::Ternary);
            parse_expression(node, b, i);
            parse_expression(node, i + 1, colon);
            parse_expression(node, colon + 1, e);
            return;
          }
        }
        depth += open_delta(t);
      }
    }

    // assignment first, then general binary: first top-level match wins
    for (int pass = 0; pass < 2; ++pass) {
      const auto& ops = pass == 0 ? assign_ops() : binary_ops();
      int depth = 0;
      for (std::size_t i = b; i < e; ++i) {
        const Token& t = tok(i);
        if (depth == 0 && i > b && t.kind == TokenKind::Punctuation &&
            ops.count(t.text) && !is_operator_like(tok(i - 1))) {
          SyntaxNode* node = parent->add_child(NodeType::BinaryOp);
          parse_expression(node, b, i);
          parse_expression(node, i + 1, e);
          return;
        }
        if (depth == 0 && pass == 1 && i > b && t.kind == TokenKind::Keyword &&
            t.text == "instanceof") {
          SyntaxNode* node = parent->add_child(NodeType::BinaryOp);
          parse_expression(node, b, i);
          parse_expression(node, i + 1, e);
          return;
        }
        depth += open_delta(t);
      }
    }

    // unary prefix / postfix increment-decrement
    {
      const Token& first = tok(b);
      if (e - b >= 2 && first.kind == TokenKind::Punctuation &&
          unary_ops().count(first.text)) {
        SyntaxNode* node = parent->add_child(NodeType::UnaryOp);
        parse_expression(node, b + 1, e);
        return;
      }
      const Token& last = tok(e - 1);
      if (e - b >= 2 && last.kind == TokenKind::Punctuation &&
          (last.text == "++" || last.text == "--")) {
        SyntaxNode* node = parent->add_child(NodeType::UnaryOp);
        parse_expression(node, b, e - 1);
        return;
      }
    }

    // call / index ending the range
    {
      const Token& last = tok(e - 1);
      if (last.kind == TokenKind::Punctuation && last.text == ")") {
        std::size_t open = match_backward(b, e - 1);
        if (open < e - 1 && open > b && tok(open - 1).kind == TokenKind::Identifier) {
          SyntaxNode* node = parent->add_child(NodeType::Call);
          parse_expression(node, open + 1, e - 1);
          return;
        }
      }
      if (last.kind == TokenKind::Punctuation && last.text == "]") {
        std::size_t open = match_backward(b, e - 1);
        if (open < e - 1 && open > b) {
          SyntaxNode* node = parent->add_child(NodeType::Other);
          parse_expression(node, open + 1, e - 1);
          return;
        }
      }
    }

    if (e - b == 1) {
      const Token& t = tok(b);
      switch (t.kind) {
        case TokenKind::Identifier:
          parent->add_child(NodeType::Identifier);
          return;
        case TokenKind::Literal:
        case TokenKind::StringLiteral:
          parent->add_child(NodeType::Literal);
          return;
        case TokenKind::Keyword:
          if (t.text == "true" || t.text == "false" || t.text == "null" ||
              t.text == "nullptr") {
            parent->add_child(NodeType::Literal);
          } else {
            parent->add_child(NodeType::Other);
          }
          return;
        case TokenKind::ImportName:
          parent->add_child(NodeType::Import);
          return;
        default:
          return;  // bare punctuation: no node
      }
    }

    // multi-token leftovers
    const Token& first = tok(b);
    if (first.kind == TokenKind::Punctuation && first.text == "(") {
      std::size_t close = find_close(b, e);
      if (close == e - 1) {
        parse_expression(parent, b + 1, e - 1);  // fully parenthesized
        return;
      }
      SyntaxNode* node = parent->add_child(NodeType::Other);
      parse_expression(node, b + 1, close);
      parse_expression(node, close + 1, e);
      return;
    }
    if (first.kind == TokenKind::Punctuation && first.text == "{") {
      std::size_t close = find_close(b, e);
      if (close == e - 1) {
        parse_brace_group(parent, b + 1, e - 1);
        return;
      }
      SyntaxNode* node = parent->add_child(NodeType::Other);
      parse_brace_group(node, b + 1, close);
      parse_expression(node, close + 1, e);
      return;
    }
    if (first.kind == TokenKind::Keyword && first.text == "new") {
      SyntaxNode* node = parent->add_child(NodeType::Other);
      parse_expression(node, b + 1, e);
      return;
    }

    // atom walk
    SyntaxNode* node = parent->add_child(NodeType::Other);
    for (std::size_t i = b; i < e; ++i) {
      const Token& t = tok(i);
      if (t.kind == TokenKind::Punctuation &&
          (t.text == "(" || t.text == "[" || t.text == "{")) {
        std::size_t close = find_close(i, e);
        if (t.text == "{") {
          parse_brace_group(node, i + 1, close);
        } else {
          parse_expression(node, i + 1, close);
        }
        i = close;
        continue;
      }
      if (t.kind == TokenKind::Identifier) {
        node->add_child(NodeType::Identifier);
      } else if (t.kind == TokenKind::Literal || t.kind == TokenKind::StringLiteral) {
        node->add_child(NodeType::Literal);
      } else if (t.kind == TokenKind::Keyword &&
                 (t.text == "true" || t.text == "false" || t.text == "null" ||
                  t.text == "nullptr")) {
        node->add_child(NodeType::Literal);
      }
    }
  }

  std::size_t find_ternary_colon(std::size_t from, std::size_t e) const {
    int depth = 0;
    for (std::size_t i = from; i < e; ++i) {
      const Token& t = tok(i);
      if (t.kind != TokenKind::Punctuation) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") {
        ++depth;
      } else if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (depth == 0) return e;
        --depth;
      } else if (depth == 0 && t.text == ":") {
        return i;
      } else if (depth == 0 && t.text == ";") {
        return e;
      }
    }
    return e;
  }

  std::vector<const Token*> sig_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diagnostics_;
};

bool is_control_owner(NodeType t) {
  switch (t) {
    case NodeType::If:
    case NodeType::Else:
    case NodeType::Switch:
    case NodeType::For:
    case NodeType::While:
    case NodeType::DoWhile:
      return true;
    default:
      return false;
  }
}

struct MetricsWalk {
  std::size_t max_nesting = 0;
  std::size_t max_depth = 0;
  std::size_t block_count = 0;
  std::size_t block_children = 0;
  std::vector<std::size_t> param_counts;
  std::size_t leaf_count = 0;
  std::size_t leaf_depth_sum = 0;
  std::array<std::size_t, kNodeTypeCount> type_counts{};
  std::array<std::size_t, kNodeTypeCount> type_depth_sums{};
  std::map<std::pair<NodeType, NodeType>, std::size_t> bigrams;
  std::size_t edge_count = 0;
  std::size_t function_count = 0;

  void visit(const SyntaxNode* n, NodeType parent, bool has_parent, std::size_t ctrl) {
    if (n->type == NodeType::Block && has_parent && is_control_owner(parent)) {
      ++ctrl;
    }
    max_nesting = std::max(max_nesting, ctrl);
    max_depth = std::max(max_depth, n->depth);
    std::size_t ti = static_cast<std::size_t>(n->type);
    type_counts[ti] += 1;
    type_depth_sums[ti] += n->depth;
    if (has_parent) {
      bigrams[{parent, n->type}] += 1;
      ++edge_count;
    }
    if (n->type == NodeType::Block) {
      ++block_count;
      block_children += n->children.size();
    }
    if (n->type == NodeType::Function) {
      ++function_count;
      std::size_t params = 0;
      for (const auto& ch : n->children) {
        if (ch->type == NodeType::ParameterList) {
          for (const auto& p : ch->children) {
            if (p->type == NodeType::Parameter) ++params;
          }
        }
      }
      param_counts.push_back(params);
    }
    if (n->children.empty()) {
      ++leaf_count;
      leaf_depth_sum += n->depth;
    }
    for (const auto& ch : n->children) {
      visit(ch.get(), n->type, true, ctrl);
    }
  }
};

void dump_node(const SyntaxNode* n, std::string& out, std::size_t indent) {
  out.append(indent * 2, ' ');
  out += node_type_name(n->type);
  out += '\n';
  for (const auto& ch : n->children) dump_node(ch.get(), out, indent + 1);
}

}  // namespace

const char* node_type_name(NodeType t) {
  switch (t) {
    case NodeType::TranslationUnit: return "TranslationUnit";
    case NodeType::Function: return "Function";
    case NodeType::ParameterList: return "ParameterList";
    case NodeType::Parameter: return "Parameter";
    case NodeType::Block: return "Block";
    case NodeType::If: return "If";
    case NodeType::Else: return "Else";
    case NodeType::Switch: return "Switch";
    case NodeType::Case: return "Case";
    case NodeType::For: return "For";
    case NodeType::While: return "While";
    case NodeType::DoWhile: return "DoWhile";
    case NodeType::Ternary: return "Ternary";
    case NodeType::Return: return "Return";
    case NodeType::Declaration: return "Declaration";
    case NodeType::Call: return "Call";
    case NodeType::Identifier: return "Identifier";
    case NodeType::Literal: return "Literal";
    case NodeType::BinaryOp: return "BinaryOp";
    case NodeType::UnaryOp: return "UnaryOp";
    case NodeType::Import: return "Import";
    case NodeType::Class: return "Class";
    case NodeType::Other: return "Other";
  }
  return "?";
}

const std::array<NodeType, kNodeTypeCount>& all_node_types() {
  static const std::array<NodeType, kNodeTypeCount> types = {
      NodeType::TranslationUnit, NodeType::Function, NodeType::ParameterList,
      NodeType::Parameter,       NodeType::Block,    NodeType::If,
      NodeType::Else,            NodeType::Switch,   NodeType::Case,
      NodeType::For,             NodeType::While,    NodeType::DoWhile,
      NodeType::Ternary,         NodeType::Return,   NodeType::Declaration,
      NodeType::Call,            NodeType::Identifier, NodeType::Literal,
      NodeType::BinaryOp,        NodeType::UnaryOp,  NodeType::Import,
      NodeType::Class,           NodeType::Other};
  return types;
}

SyntaxTree parse_syntax(const TokenStream& stream, const LanguageProfile& profile) {
  (void)profile;  // keyword classification already happened during lexing
  Parser parser(stream);
  return parser.run();
}

SyntaxMetrics syntax_metrics(const SyntaxTree& tree, const TokenStream& stream) {
  SyntaxMetrics m;
  if (!tree.root) return m;
  MetricsWalk walk;
  walk.visit(tree.root.get(), NodeType::TranslationUnit, false, 0);

  m.max_nesting_depth = walk.max_nesting;
  m.max_ast_depth = walk.max_depth;
  if (walk.block_count > 0) {
    m.avg_branching_factor =
        static_cast<double>(walk.block_children) / static_cast<double>(walk.block_count);
  }
  if (!walk.param_counts.empty()) {
    double n = static_cast<double>(walk.param_counts.size());
    double sum = 0;
    for (std::size_t c : walk.param_counts) sum += static_cast<double>(c);
    double mean = sum / n;
    double var = 0;
    for (std::size_t c : walk.param_counts) {
      double d = static_cast<double>(c) - mean;
      var += d * d;
    }
    m.avg_params_per_function = mean;
    m.param_count_stddev = std::sqrt(var / n);  // population stddev
  }
  if (walk.leaf_count > 0) {
    m.avg_leaf_depth =
        static_cast<double>(walk.leaf_depth_sum) / static_cast<double>(walk.leaf_count);
  }
  for (std::size_t i = 0; i < kNodeTypeCount; ++i) {
    if (walk.type_counts[i] > 0) {
      m.avg_depth_per_type[i] = static_cast<double>(walk.type_depth_sums[i]) /
                                static_cast<double>(walk.type_counts[i]);
    }
  }
  if (walk.edge_count > 0) {
    for (const auto& [edge, n] : walk.bigrams) {
      m.bigram_freq[edge] =
          static_cast<double>(n) / static_cast<double>(walk.edge_count);
    }
  }
  std::map<std::string, std::size_t> kw_counts;
  std::size_t kw_total = 0;
  for (const Token& t : stream.tokens) {
    if (t.kind == TokenKind::Keyword) {
      kw_counts[t.text] += 1;
      ++kw_total;
    }
  }
  if (kw_total > 0) {
    for (const auto& [w, n] : kw_counts) {
      m.keyword_freq[w] = static_cast<double>(n) / static_cast<double>(kw_total);
    }
  }
  return m;
}

std::size_t count_functions(const SyntaxTree& tree) {
  if (!tree.root) return 0;
  MetricsWalk walk;
  walk.visit(tree.root.get(), NodeType::TranslationUnit, false, 0);
  return walk.function_count;
}

std::string dump_tree(const SyntaxTree& tree) {
  std::string out;
  if (tree.root) dump_node(tree.root.get(), out, 0);
  return out;
}

}  // namespace stylo
