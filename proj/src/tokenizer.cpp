#include "stylo/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "stylo/text.hpp"

namespace stylo {

namespace {

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_hspace(char c) { return c == ' ' || c == '\t'; }

bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

bool is_hex_digit(unsigned char c) {
  return std::isdigit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

// Multi-character operators recognized by maximal munch. Shared between the
// two languages; unused entries are harmless.
const std::array<const char*, 1> kOps4 = {">>>="};
const std::array<const char*, 5> kOps3 = {"<<=", ">>=", "->*", "...", ">>>"};
const std::array<const char*, 20> kOps2 = {
    "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="};

class Scanner {
 public:
  Scanner(std::string_view src, const LanguageProfile& profile, std::string path)
      : src_(src), profile_(profile) {
    out_.path = std::move(path);
    out_.language = profile.id;
    out_.char_count = src.size();
    out_.line_count = count_lines(src);
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  TokenStream run() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#' && profile_.id == "cpp" && at_line_start_ws(pos_)) {
        scan_directive();
      } else if (is_space_char(c)) {
        scan_whitespace();
      } else if (match("//")) {
        scan_line_comment();
      } else if (match("/*")) {
        scan_block_comment();
      } else if (c == '"') {
        scan_quoted(TokenKind::StringLiteral, '"', "unterminated string literal");
      } else if (c == '\'') {
        scan_quoted(TokenKind::Literal, '\'', "unterminated character literal");
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        scan_number();
      } else if (is_ident_start(static_cast<unsigned char>(c))) {
        scan_word();
      } else {
        scan_punct();
      }
    }
    return std::move(out_);
  }

 private:
  bool match(std::string_view s) const {
    return src_.substr(pos_, s.size()) == s;
  }

  // True when every char between the previous newline and `p` is a blank.
  bool at_line_start_ws(std::size_t p) const {
    while (p > 0) {
      char c = src_[p - 1];
      if (c == '\n') return true;
      if (!is_hspace(c)) return false;
      --p;
    }
    return true;
  }

  void emit(TokenKind kind, std::size_t start, std::size_t end) {
    Token t;
    t.kind = kind;
    t.text = std::string(src_.substr(start, end - start));
    t.offset = start;
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), start);
    std::size_t li = static_cast<std::size_t>(it - line_starts_.begin()) - 1;
    t.line = static_cast<std::uint32_t>(li + 1);
    t.column = static_cast<std::uint32_t>(start - line_starts_[li] + 1);
    out_.tokens.push_back(std::move(t));
  }

  void diag(const char* msg, std::size_t at) {
    Diagnostic d;
    d.message = msg;
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), at);
    std::size_t li = static_cast<std::size_t>(it - line_starts_.begin()) - 1;
    d.line = static_cast<std::uint32_t>(li + 1);
    d.column = static_cast<std::uint32_t>(at - line_starts_[li] + 1);
    out_.diagnostics.push_back(std::move(d));
  }

  void scan_whitespace() {
    std::size_t start = pos_;
    bool newline = false;
    while (pos_ < src_.size() && is_space_char(src_[pos_])) {
      if (src_[pos_] == '\n') newline = true;
      ++pos_;
    }
    emit(TokenKind::Whitespace, start, pos_);
    if (newline) import_pending_ = false;
  }

  void scan_line_comment() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    emit(TokenKind::Comment, start, pos_);
  }

  void scan_block_comment() {
    std::size_t start = pos_;
    std::size_t close = src_.find(profile_.block_comment.second, pos_ + 2);
    if (close == std::string_view::npos) {
      pos_ = src_.size();
      diag("unterminated block comment", start);
    } else {
      pos_ = close + profile_.block_comment.second.size();
    }
    emit(TokenKind::Comment, start, pos_);
  }

  // Strings do not stop at newlines: an unterminated literal extends to end
  // of file with a diagnostic, and extraction carries on.
  void scan_quoted(TokenKind kind, char delim, const char* err) {
    std::size_t start = pos_;
    ++pos_;
    bool closed = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\\' && pos_ + 1 < src_.size()) {
        pos_ += 2;
        continue;
      }
      ++pos_;
      if (c == delim) {
        closed = true;
        break;
      }
    }
    if (!closed) diag(err, start);
    emit(kind, start, pos_);
  }

  void scan_number() {
    std::size_t start = pos_;
    bool hex_prefix = false;
    if (match("0x") || match("0X") || match("0b") || match("0B")) {
      hex_prefix = src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X';
      pos_ += 2;
    }
    char prev = 0;
    while (pos_ < src_.size()) {
      unsigned char c = static_cast<unsigned char>(src_[pos_]);
      unsigned char next = pos_ + 1 < src_.size()
                               ? static_cast<unsigned char>(src_[pos_ + 1])
                               : 0;
      if (std::isalnum(c)) {
        prev = static_cast<char>(c);
        ++pos_;
      } else if (c == '.' && std::isdigit(next)) {
        prev = '.';
        ++pos_;
      } else if (((c == '\'' && profile_.id == "cpp") ||
                  (c == '_' && profile_.id == "java")) &&
                 is_hex_digit(next)) {
        prev = static_cast<char>(c);
        ++pos_;
      } else if ((c == '+' || c == '-') && !hex_prefix && (prev == 'e' || prev == 'E')) {
        prev = static_cast<char>(c);
        ++pos_;
      } else if ((c == '+' || c == '-') && hex_prefix && (prev == 'p' || prev == 'P')) {
        prev = static_cast<char>(c);
        ++pos_;
      } else {
        break;
      }
    }
    emit(TokenKind::Literal, start, pos_);
  }

  void scan_word() {
    std::size_t start = pos_;
    if (import_pending_) {
      // Imported names keep their complete dotted form (java.util.List,
      // java.util.*). A keyword like `static` keeps the import pending.
      while (pos_ < src_.size()) {
        unsigned char c = static_cast<unsigned char>(src_[pos_]);
        if (is_ident_char(c) || c == '.' || c == '*') {
          ++pos_;
        } else {
          break;
        }
      }
      std::string text(src_.substr(start, pos_ - start));
      if (profile_.is_keyword(text) && text.find('.') == std::string::npos) {
        emit(TokenKind::Keyword, start, pos_);
      } else {
        emit(TokenKind::ImportName, start, pos_);
        import_pending_ = false;
      }
      return;
    }
    while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    std::string text(src_.substr(start, pos_ - start));
    if (profile_.is_keyword(text)) {
      emit(TokenKind::Keyword, start, pos_);
      if (profile_.import_marker == "import" && text == "import") {
        import_pending_ = true;
      }
    } else {
      emit(TokenKind::Identifier, start, pos_);
    }
  }

  void scan_punct() {
    std::size_t start = pos_;
    std::size_t len = 1;
    for (const char* op : kOps4) {
      if (match(op)) len = 4;
    }
    if (len == 1) {
      for (const char* op : kOps3) {
        if (match(op)) len = 3;
      }
    }
    if (len == 1) {
      for (const char* op : kOps2) {
        if (match(op)) len = 2;
      }
    }
    pos_ += len;
    emit(TokenKind::Punctuation, start, pos_);
    if (len == 1 && src_[start] == ';') import_pending_ = false;
  }

  // Preprocessor directives are lexed line-wise. `#include` yields the
  // marker plus an ImportName; any other directive becomes a single Macro
  // token spanning the line (following backslash continuations).
  void scan_directive() {
    std::size_t start = pos_;
    std::size_t q = pos_ + 1;
    while (q < src_.size() && is_hspace(src_[q])) ++q;
    std::size_t name_start = q;
    while (q < src_.size() && std::islower(static_cast<unsigned char>(src_[q]))) ++q;
    std::string name(src_.substr(name_start, q - name_start));

    if (name != "include") {
      std::size_t end = pos_;
      while (true) {
        std::size_t nl = src_.find('\n', end);
        if (nl == std::string_view::npos) {
          end = src_.size();
          break;
        }
        std::size_t line_end = nl;
        if (line_end > 0 && src_[line_end - 1] == '\r') --line_end;
        if (line_end > start && src_[line_end - 1] == '\\') {
          end = nl + 1;  // continuation: swallow the newline, keep going
        } else {
          end = line_end;
          break;
        }
      }
      pos_ = end;
      emit(TokenKind::Macro, start, pos_);
      return;
    }

    pos_ = q;
    emit(TokenKind::Macro, start, pos_);  // the "#include" marker itself
    std::size_t ws = pos_;
    while (pos_ < src_.size() && is_hspace(src_[pos_])) ++pos_;
    if (pos_ > ws) emit(TokenKind::Whitespace, ws, pos_);
    if (pos_ >= src_.size()) return;
    char open = src_[pos_];
    if (open != '<' && open != '"') return;  // e.g. `#include MACRO`
    char close = open == '<' ? '>' : '"';
    emit(TokenKind::Punctuation, pos_, pos_ + 1);
    ++pos_;
    std::size_t name_begin = pos_;
    while (pos_ < src_.size() && src_[pos_] != close && src_[pos_] != '\n') ++pos_;
    if (pos_ > name_begin) emit(TokenKind::ImportName, name_begin, pos_);
    if (pos_ < src_.size() && src_[pos_] == close) {
      emit(TokenKind::Punctuation, pos_, pos_ + 1);
      ++pos_;
    }
  }

  std::string_view src_;
  const LanguageProfile& profile_;
  std::size_t pos_ = 0;
  bool import_pending_ = false;
  std::vector<std::size_t> line_starts_;
  TokenStream out_;
};

}  // namespace

std::string sanitize_utf8(std::string_view input) {
  static const char* replacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(input.size());
  std::size_t i = 0;
  while (i < input.size()) {
    unsigned char c = static_cast<unsigned char>(input[i]);
    if (c < 0x80) {
      out += static_cast<char>(c);
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t min_cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      min_cp = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      min_cp = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      min_cp = 0x10000;
    } else {
      out += replacement;
      ++i;
      continue;
    }
    if (i + len > input.size()) {
      out += replacement;
      ++i;
      continue;
    }
    bool ok = true;
    std::uint32_t cp = c & (0x7F >> len);
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(input[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (ok && (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) {
      ok = false;
    }
    if (ok) {
      out.append(input.substr(i, len));
      i += len;
    } else {
      out += replacement;
      ++i;
    }
  }
  return out;
}

std::size_t count_lines(std::string_view text) {
  if (text.empty()) return 0;
  std::size_t n = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  if (text.back() != '\n') ++n;
  return n;
}

TokenStream tokenize(std::string_view source, const LanguageProfile& profile,
                     const std::string& path) {
  std::string clean = sanitize_utf8(source);
  Scanner scanner(clean, profile, path);
  return scanner.run();
}

std::vector<std::string> split_identifier(std::string_view word) {
  enum class Cls { None, Lower, Upper, Digit };
  auto classify = [](unsigned char c) {
    if (c >= 'a' && c <= 'z') return Cls::Lower;
    if (c >= 'A' && c <= 'Z') return Cls::Upper;
    if (c >= '0' && c <= '9') return Cls::Digit;
    if (c >= 0x80) return Cls::Lower;  // non-ASCII treated as lowercase letters
    return Cls::None;                  // separator
  };
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  Cls prev = Cls::None;
  for (std::size_t i = 0; i < word.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(word[i]);
    Cls cls = classify(c);
    if (cls == Cls::None) {
      flush();
      prev = Cls::None;
      continue;
    }
    bool boundary = false;
    if (prev == Cls::Lower && cls == Cls::Upper) boundary = true;
    if (prev == Cls::Digit && cls != Cls::Digit) boundary = true;
    if (prev != Cls::Digit && prev != Cls::None && cls == Cls::Digit) boundary = true;
    if (prev == Cls::Upper && cls == Cls::Upper && i + 1 < word.size() &&
        classify(static_cast<unsigned char>(word[i + 1])) == Cls::Lower) {
      boundary = true;  // acronym followed by a word: HTTPServer -> http server
    }
    if (boundary) flush();
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    cur += static_cast<char>(c);
    prev = cls;
  }
  flush();
  return out;
}

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Comment: return "Comment";
    case TokenKind::StringLiteral: return "StringLiteral";
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::ImportName: return "ImportName";
    case TokenKind::Literal: return "Literal";
    case TokenKind::Punctuation: return "Punctuation";
    case TokenKind::Whitespace: return "Whitespace";
    case TokenKind::Macro: return "Macro";
  }
  return "?";
}

}  // namespace stylo
