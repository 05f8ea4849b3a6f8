#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace stylo {

// Lexical description of one supported language. Immutable once built, so a
// single profile can be shared across any number of worker threads.
struct LanguageProfile {
  std::string id;                                  // "cpp" or "java"
  std::set<std::string> keywords;                  // lowercase reserved words
  std::string line_comment = "//";
  std::pair<std::string, std::string> block_comment = {"/*", "*/"};
  std::string import_marker;                       // "#include" or "import"
  std::string string_delims = "\"";                // string literal openers

  bool is_keyword(const std::string& word) const {
    return keywords.count(word) > 0;
  }
};

struct UnknownLanguage : std::runtime_error {
  explicit UnknownLanguage(const std::string& id)
      : std::runtime_error("unknown language: " + id) {}
};

// Built-in profiles. Exactly one profile exists per language id.
const LanguageProfile& builtin_profile(const std::string& id);

// Loads a profile whose keyword list comes from `<dir>/<id>.txt`
// (one keyword per line, '#' starts a comment). Everything else is the
// built-in definition for that language.
LanguageProfile load_profile(const std::string& id, const std::string& keyword_dir);

}  // namespace stylo
