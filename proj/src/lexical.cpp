#include "stylo/lexical.hpp"

#include <cctype>

#include "stylo/text.hpp"
#include "stylo/tokenizer.hpp"

namespace stylo {

namespace {

// Delimiters are stripped before word splitting: // and /* */ for comments,
// one quote on each side for strings.
std::string strip_markers(const Token& t, const LanguageProfile& profile) {
  std::string_view s = t.text;
  if (t.kind == TokenKind::Comment) {
    if (starts_with(s, profile.block_comment.first)) {
      s.remove_prefix(profile.block_comment.first.size());
      if (s.size() >= profile.block_comment.second.size() &&
          s.substr(s.size() - profile.block_comment.second.size()) ==
              profile.block_comment.second) {
        s.remove_suffix(profile.block_comment.second.size());
      }
    } else if (starts_with(s, profile.line_comment)) {
      s.remove_prefix(profile.line_comment.size());
    }
  } else if (t.kind == TokenKind::StringLiteral) {
    if (!s.empty() && s.front() == '"') s.remove_prefix(1);
    if (!s.empty() && s.back() == '"') s.remove_suffix(1);
  }
  return std::string(s);
}

void add_subwords(CategoryProfile& cat, std::string_view text) {
  // Any non-alphanumeric, non-underscore character separates words; the
  // pieces then go through identifier splitting and lowercasing.
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    for (auto& sub : split_identifier(word)) {
      cat.counts[sub] += 1;
      cat.total += 1;
    }
    word.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '_' || c >= 0x80) {
      word += static_cast<char>(c);
    } else {
      flush();
    }
  }
  flush();
}

void add_whole(CategoryProfile& cat, const std::string& key) {
  cat.counts[key] += 1;
  cat.total += 1;
}

}  // namespace

const char* lex_category_name(LexCategory c) {
  switch (c) {
    case LexCategory::CommentsAndStrings: return "comments_strings";
    case LexCategory::Identifiers: return "identifiers";
    case LexCategory::Keywords: return "keywords";
    case LexCategory::ImportedLibraries: return "imports";
  }
  return "?";
}

LexicalProfile lexical_profile(const TokenStream& stream, const LanguageProfile& profile) {
  LexicalProfile out;
  auto& comments = out.categories[static_cast<std::size_t>(LexCategory::CommentsAndStrings)];
  auto& idents = out.categories[static_cast<std::size_t>(LexCategory::Identifiers)];
  auto& keywords = out.categories[static_cast<std::size_t>(LexCategory::Keywords)];
  auto& imports = out.categories[static_cast<std::size_t>(LexCategory::ImportedLibraries)];

  for (const Token& t : stream.tokens) {
    switch (t.kind) {
      case TokenKind::Comment:
      case TokenKind::StringLiteral:
        add_subwords(comments, strip_markers(t, profile));
        break;
      case TokenKind::Identifier:
        for (auto& sub : split_identifier(t.text)) {
          idents.counts[sub] += 1;
          idents.total += 1;
        }
        break;
      case TokenKind::Keyword:
        add_whole(keywords, t.text);
        break;
      case TokenKind::ImportName:
        add_whole(imports, lower_ascii(t.text));
        break;
      default:
        break;  // literals, punctuation, whitespace, macros: no category
    }
  }

  for (auto& cat : out.categories) {
    if (cat.total == 0) continue;
    for (const auto& [word, n] : cat.counts) {
      cat.tf[word] = static_cast<double>(n) / static_cast<double>(cat.total);
    }
  }
  return out;
}

}  // namespace stylo
