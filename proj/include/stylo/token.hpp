#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace stylo {

enum class TokenKind : std::uint8_t {
  Comment,
  StringLiteral,
  Identifier,
  Keyword,
  ImportName,
  Literal,
  Punctuation,
  Whitespace,
  Macro,  // one whole non-include preprocessor directive, or the "#include" marker
};

const char* token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;
  std::uint32_t line = 1;    // 1-based
  std::uint32_t column = 1;  // 1-based, in bytes
  std::size_t offset = 0;    // byte offset in the (sanitized) source
};

struct Diagnostic {
  std::string message;
  std::uint32_t line = 1;
  std::uint32_t column = 1;
};

// Full-coverage token stream: concatenating the token texts in order
// reproduces the sanitized source byte for byte.
struct TokenStream {
  std::string path;
  std::string language;
  std::vector<Token> tokens;
  std::size_t line_count = 0;
  std::size_t char_count = 0;  // bytes of sanitized source
  std::vector<Diagnostic> diagnostics;

  std::string reconstruct() const {
    std::string out;
    out.reserve(char_count);
    for (const Token& t : tokens) out += t.text;
    return out;
  }
};

}  // namespace stylo
