#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "stylo/token.hpp"

namespace stylo {

constexpr std::size_t kLineHistogramBins = 16;  // 10-char bins, last is 150+

// Text-level structural layout features. Densities are smoothed log ratios
// ln((count + 1) / (line_count + 1)) so every value is finite.
struct LayoutMetrics {
  double control_structure_density = 0.0;
  double ternary_operator_density = 0.0;
  double token_density = 0.0;
  double comment_density = 0.0;
  double literal_density = 0.0;
  double keyword_density = 0.0;
  double function_density = 0.0;
  double macro_density = 0.0;
  double tab_density = 0.0;
  double space_density = 0.0;
  double empty_line_density = 0.0;
  double avg_line_length = 0.0;
  double line_length_stddev = 0.0;
  double whitespace_ratio = 0.0;
  double newline_before_open_brace_ratio = 0.0;
  double tab_indent_ratio = 0.0;
  std::array<double, kLineHistogramBins> line_length_histogram{};
};

// `stream` must be the token stream of `source`. The function count is
// delegated to the syntax parser's function detector.
LayoutMetrics layout_metrics(std::string_view source, const TokenStream& stream);

// Same, with the function count already known (avoids a second parse when
// the caller builds the syntax tree anyway).
LayoutMetrics layout_metrics(std::string_view source, const TokenStream& stream,
                             std::size_t function_count);

}  // namespace stylo
