#include "stylo/language.hpp"

#include <fstream>

namespace stylo {

namespace {

std::set<std::string> cpp_keywords() {
  return {
      "alignas",      "alignof",      "and",           "and_eq",
      "asm",          "auto",         "bitand",        "bitor",
      "bool",         "break",        "case",          "catch",
      "char",         "char8_t",      "char16_t",      "char32_t",
      "class",        "compl",        "concept",       "const",
      "consteval",    "constexpr",    "constinit",     "const_cast",
      "continue",     "co_await",     "co_return",     "co_yield",
      "decltype",     "default",      "delete",        "do",
      "double",       "dynamic_cast", "else",          "enum",
      "explicit",     "export",       "extern",        "false",
      "float",        "for",          "friend",        "goto",
      "if",           "inline",       "int",           "long",
      "mutable",      "namespace",    "new",           "noexcept",
      "not",          "not_eq",       "nullptr",       "operator",
      "or",           "or_eq",        "private",       "protected",
      "public",       "register",     "reinterpret_cast", "requires",
      "return",       "short",        "signed",        "sizeof",
      "static",       "static_assert", "static_cast",  "struct",
      "switch",       "template",     "this",          "thread_local",
      "throw",        "true",         "try",           "typedef",
      "typeid",       "typename",     "union",         "unsigned",
      "using",        "virtual",      "void",          "volatile",
      "wchar_t",      "while",        "xor",           "xor_eq",
  };
}

std::set<std::string> java_keywords() {
  return {
      "abstract", "assert",     "boolean",  "break",     "byte",
      "case",     "catch",      "char",     "class",     "const",
      "continue", "default",    "do",       "double",    "else",
      "enum",     "extends",    "false",    "final",     "finally",
      "float",    "for",        "goto",     "if",        "implements",
      "import",   "instanceof", "int",      "interface", "long",
      "native",   "new",        "null",     "package",   "private",
      "protected", "public",    "return",   "short",     "static",
      "strictfp", "super",      "switch",   "synchronized", "this",
      "throw",    "throws",     "transient", "true",     "try",
      "void",     "volatile",   "while",
  };
}

LanguageProfile make_cpp() {
  LanguageProfile p;
  p.id = "cpp";
  p.keywords = cpp_keywords();
  p.import_marker = "#include";
  return p;
}

LanguageProfile make_java() {
  LanguageProfile p;
  p.id = "java";
  p.keywords = java_keywords();
  p.import_marker = "import";
  return p;
}

}  // namespace

const LanguageProfile& builtin_profile(const std::string& id) {
  static const LanguageProfile cpp = make_cpp();
  static const LanguageProfile java = make_java();
  if (id == "cpp") return cpp;
  if (id == "java") return java;
  throw UnknownLanguage(id);
}

LanguageProfile load_profile(const std::string& id, const std::string& keyword_dir) {
  LanguageProfile profile = builtin_profile(id);
  std::string path = keyword_dir + "/" + id + ".txt";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open keyword list: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    words.insert(line.substr(b, e - b + 1));
  }
  if (words.empty()) throw std::runtime_error("empty keyword list: " + path);
  profile.keywords = std::move(words);
  return profile;
}

}  // namespace stylo
