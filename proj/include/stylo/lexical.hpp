#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>

#include "stylo/language.hpp"
#include "stylo/token.hpp"

namespace stylo {

// The four vocabulary categories. Comments and double-quoted strings are
// word-split and subword-split; identifiers are subword-split; keywords are
// counted as-is; imported names are kept whole (lowercased keys).
enum class LexCategory : std::size_t {
  CommentsAndStrings = 0,
  Identifiers = 1,
  Keywords = 2,
  ImportedLibraries = 3,
};

constexpr std::size_t kLexCategoryCount = 4;
const char* lex_category_name(LexCategory c);

struct CategoryProfile {
  std::size_t total = 0;                  // words counted in this category
  std::map<std::string, double> tf;       // word -> frequency, sums to 1
  std::map<std::string, std::size_t> counts;
};

struct LexicalProfile {
  std::array<CategoryProfile, kLexCategoryCount> categories;

  const CategoryProfile& category(LexCategory c) const {
    return categories[static_cast<std::size_t>(c)];
  }
};

LexicalProfile lexical_profile(const TokenStream& stream, const LanguageProfile& profile);

}  // namespace stylo
