#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stylo/language.hpp"
#include "stylo/token.hpp"

namespace stylo {

// Replaces invalid UTF-8 byte sequences with U+FFFD. Tokenization operates
// on the sanitized text so that a dirty corpus file never aborts a batch.
std::string sanitize_utf8(std::string_view input);

// Number of newline-separated lines; a trailing partial line counts as one.
std::size_t count_lines(std::string_view text);

// Language-aware full-coverage lexer. Comments and string literals are
// single tokens including their delimiters; whitespace is kept as tokens so
// the stream reconstructs the input exactly. Unterminated strings/comments
// extend to end of file and record a diagnostic.
TokenStream tokenize(std::string_view source, const LanguageProfile& profile,
                     const std::string& path = "");

// Splits an identifier at camelCase boundaries, underscores (and any other
// non-alphanumeric characters), and digit/letter boundaries; lowercases the
// pieces and drops empty segments.
std::vector<std::string> split_identifier(std::string_view word);

}  // namespace stylo
