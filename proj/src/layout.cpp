#include "stylo/layout.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "stylo/language.hpp"
#include "stylo/syntax.hpp"
#include "stylo/tokenizer.hpp"

namespace stylo {

namespace {

double smoothed_log_density(std::size_t count, std::size_t lines) {
  return std::log((static_cast<double>(count) + 1.0) /
                  (static_cast<double>(lines) + 1.0));
}

bool is_ws_byte(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

// [start, end) byte ranges of each line, excluding the \n and a trailing \r.
// A trailing newline does not open a final empty line.
std::vector<std::pair<std::size_t, std::size_t>> split_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') {
      std::size_t end = i;
      if (end > start && text[end - 1] == '\r') --end;
      out.emplace_back(start, end);
      start = i + 1;
    }
  }
  if (start < text.size()) out.emplace_back(start, text.size());
  return out;
}

// The seven control-structure keywords, with `else if` counted once.
std::size_t control_structure_count(const TokenStream& stream) {
  std::vector<const Token*> kws;
  for (const Token& t : stream.tokens) {
    if (t.kind == TokenKind::Whitespace || t.kind == TokenKind::Comment) continue;
    kws.push_back(&t);
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < kws.size(); ++i) {
    const Token& t = *kws[i];
    if (t.kind != TokenKind::Keyword) continue;
    if (t.text == "else" && i + 1 < kws.size() &&
        kws[i + 1]->kind == TokenKind::Keyword && kws[i + 1]->text == "if") {
      ++count;  // `else if` is one structure
      ++i;
      continue;
    }
    if (t.text == "do" || t.text == "if" || t.text == "else" || t.text == "switch" ||
        t.text == "for" || t.text == "while") {
      ++count;
    }
  }
  return count;
}

// `?` tokens with a matching `:` before the statement ends.
std::size_t ternary_count(const TokenStream& stream) {
  std::vector<const Token*> sig;
  for (const Token& t : stream.tokens) {
    if (t.kind == TokenKind::Whitespace || t.kind == TokenKind::Comment ||
        t.kind == TokenKind::Macro) {
      continue;
    }
    sig.push_back(&t);
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (sig[i]->kind != TokenKind::Punctuation || sig[i]->text != "?") continue;
    int depth = 0;
    for (std::size_t j = i + 1; j < sig.size(); ++j) {
      const Token& t = *sig[j];
      if (t.kind != TokenKind::Punctuation) continue;
      if (t.text == "(" || t.text == "[") {
        ++depth;
      } else if (t.text == ")" || t.text == "]") {
        if (depth == 0) break;
        --depth;
      } else if (depth == 0) {
        if (t.text == ":") {
          ++count;
          break;
        }
        if (t.text == ";" || t.text == "{" || t.text == "}") break;
      }
    }
  }
  return count;
}

std::size_t macro_directive_count(const TokenStream& stream) {
  std::size_t count = 0;
  for (const Token& t : stream.tokens) {
    if (t.kind != TokenKind::Macro) continue;
    // directive name = first lowercase run after '#'
    std::size_t i = 0;
    while (i < t.text.size() && (t.text[i] == '#' || t.text[i] == ' ' || t.text[i] == '\t')) ++i;
    std::size_t b = i;
    while (i < t.text.size() && t.text[i] >= 'a' && t.text[i] <= 'z') ++i;
    if (t.text.substr(b, i - b) != "include") ++count;
  }
  return count;
}

}  // namespace

LayoutMetrics layout_metrics(std::string_view source, const TokenStream& stream,
                             std::size_t function_count) {
  LayoutMetrics m;
  std::string clean = sanitize_utf8(source);
  std::size_t lines = count_lines(clean);
  auto line_spans = split_lines(clean);

  std::size_t token_count = 0, comment_count = 0, literal_count = 0, keyword_count = 0;
  std::size_t open_braces = 0, newline_braces = 0;
  for (const Token& t : stream.tokens) {
    if (t.kind != TokenKind::Whitespace) ++token_count;
    if (t.kind == TokenKind::Comment) ++comment_count;
    if (t.kind == TokenKind::Literal || t.kind == TokenKind::StringLiteral) ++literal_count;
    if (t.kind == TokenKind::Keyword) ++keyword_count;
    if (t.kind == TokenKind::Punctuation && t.text == "{") {
      ++open_braces;
      // preceded by a newline, ignoring horizontal whitespace; the start of
      // the file counts as a line start
      std::size_t p = t.offset;
      while (p > 0 && (clean[p - 1] == ' ' || clean[p - 1] == '\t')) --p;
      if (p == 0 || clean[p - 1] == '\n' || clean[p - 1] == '\r') ++newline_braces;
    }
  }

  std::size_t tabs = 0, spaces = 0, ws_bytes = 0;
  for (char c : clean) {
    if (c == '\t') ++tabs;
    if (c == ' ') ++spaces;
    if (is_ws_byte(c)) ++ws_bytes;
  }

  std::size_t empty_lines = 0, indented = 0, tab_indented = 0;
  for (auto [b, e] : line_spans) {
    bool blank = true;
    for (std::size_t k = b; k < e; ++k) {
      if (clean[k] != ' ' && clean[k] != '\t') {
        blank = false;
        break;
      }
    }
    if (blank) ++empty_lines;
    if (e > b && (clean[b] == ' ' || clean[b] == '\t')) {
      ++indented;
      if (clean[b] == '\t') ++tab_indented;
    }
  }

  m.control_structure_density = smoothed_log_density(control_structure_count(stream), lines);
  m.ternary_operator_density = smoothed_log_density(ternary_count(stream), lines);
  m.token_density = smoothed_log_density(token_count, lines);
  m.comment_density = smoothed_log_density(comment_count, lines);
  m.literal_density = smoothed_log_density(literal_count, lines);
  m.keyword_density = smoothed_log_density(keyword_count, lines);
  m.function_density = smoothed_log_density(function_count, lines);
  m.macro_density = smoothed_log_density(macro_directive_count(stream), lines);
  m.tab_density = smoothed_log_density(tabs, lines);
  m.space_density = smoothed_log_density(spaces, lines);
  m.empty_line_density = smoothed_log_density(empty_lines, lines);

  if (!line_spans.empty()) {
    double n = static_cast<double>(line_spans.size());
    double sum = 0;
    for (auto [b, e] : line_spans) sum += static_cast<double>(e - b);
    double mean = sum / n;
    double var = 0;
    for (auto [b, e] : line_spans) {
      double d = static_cast<double>(e - b) - mean;
      var += d * d;
    }
    m.avg_line_length = mean;
    m.line_length_stddev = std::sqrt(var / n);
    for (auto [b, e] : line_spans) {
      std::size_t bin = std::min((e - b) / 10, kLineHistogramBins - 1);
      m.line_length_histogram[bin] += 1.0;
    }
    for (double& bin : m.line_length_histogram) bin /= n;
  }

  std::size_t non_ws = clean.size() - ws_bytes;
  m.whitespace_ratio = static_cast<double>(ws_bytes) /
                       static_cast<double>(non_ws > 0 ? non_ws : 1);
  if (open_braces > 0) {
    m.newline_before_open_brace_ratio =
        static_cast<double>(newline_braces) / static_cast<double>(open_braces);
  }
  if (indented > 0) {
    m.tab_indent_ratio =
        static_cast<double>(tab_indented) / static_cast<double>(indented);
  }
  return m;
}

LayoutMetrics layout_metrics(std::string_view source, const TokenStream& stream) {
  SyntaxTree tree = parse_syntax(stream, builtin_profile(stream.language));
  return layout_metrics(source, stream, count_functions(tree));
}

}  // namespace stylo
