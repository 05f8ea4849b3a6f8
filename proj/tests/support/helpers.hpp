#pragma once

#include <string>
#include <vector>

#include "stylo/rng.hpp"
#include "stylo/token.hpp"

namespace testsupport {

inline std::string source_dir() { return STYLO_SOURCE_DIR; }

inline std::string fixture(const std::string& rel) {
  return source_dir() + "/tests/fixtures/" + rel;
}

// Tokens that carry content (everything except whitespace).
inline std::vector<const stylo::Token*> content_tokens(const stylo::TokenStream& s) {
  std::vector<const stylo::Token*> out;
  for (const auto& t : s.tokens) {
    if (t.kind != stylo::TokenKind::Whitespace) out.push_back(&t);
  }
  return out;
}

// Random code-ish text (including garbage) for totality properties.
inline std::string random_snippet(stylo::Rng& rng, std::size_t max_len = 200) {
  static const std::string alphabet =
      "abcXYZ_019 \t\n(){}[];,.\"'/*#<>=+-?:\\%&|!~^\x80\xc3\xa9";
  std::size_t len = rng.uniform_index(max_len + 1);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) {
    out += alphabet[rng.uniform_index(alphabet.size())];
  }
  return out;
}

}  // namespace testsupport
