#include <doctest.h>

#include <cmath>

#include "stylo/layout.hpp"
#include "stylo/tokenizer.hpp"
#include "support/helpers.hpp"

using namespace stylo;

namespace {

const LanguageProfile& cpp() { return builtin_profile("cpp"); }

LayoutMetrics metrics_of(const std::string& src) {
  auto stream = tokenize(src, cpp());
  return layout_metrics(src, stream);
}

std::vector<double> all_scalars(const LayoutMetrics& m) {
  std::vector<double> v = {m.control_structure_density,
                           m.ternary_operator_density,
                           m.token_density,
                           m.comment_density,
                           m.literal_density,
                           m.keyword_density,
                           m.function_density,
                           m.macro_density,
                           m.tab_density,
                           m.space_density,
                           m.empty_line_density,
                           m.avg_line_length,
                           m.line_length_stddev,
                           m.whitespace_ratio,
                           m.newline_before_open_brace_ratio,
                           m.tab_indent_ratio};
  for (double b : m.line_length_histogram) v.push_back(b);
  return v;
}

}  // namespace

TEST_CASE("empty file yields all-zero metrics") {
  auto m = metrics_of("");
  for (double v : all_scalars(m)) CHECK(v == 0.0);
}

TEST_CASE("comment density on a 9-line file with 2 comment tokens") {
  std::string src =
      "// one\n"
      "int a;\n"
      "int b;\n"
      "/* two\n"
      "   spans\n"
      "   lines */\n"
      "int c;\n"
      "int d;\n"
      "int e;\n";
  auto stream = tokenize(src, cpp());
  REQUIRE(stream.line_count == 9);
  auto m = layout_metrics(src, stream);
  CHECK(m.comment_density == doctest::Approx(std::log(3.0 / 10.0)).epsilon(1e-12));
  CHECK(m.comment_density == doctest::Approx(-1.20397280432594).epsilon(1e-9));
}

TEST_CASE("newline before open brace ratio") {
  // 4 open braces, exactly 1 preceded by a newline
  std::string src =
      "void f() {\n"
      "  if (x) { y(); }\n"
      "  while (z)\n"
      "  {\n"
      "    q();\n"
      "  }\n"
      "}\n"
      "void g() { }\n";
  auto m = metrics_of(src);
  CHECK(m.newline_before_open_brace_ratio == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("braces inside comments and strings never count") {
  std::string src = "char* s = \"{{{\"; // {{{\n";
  auto stream = tokenize(src, cpp());
  auto m = layout_metrics(src, stream);
  CHECK(m.newline_before_open_brace_ratio == 0.0);
}

TEST_CASE("else if counts once") {
  // if + else-if + else = 3 structures on one line
  std::string src = "if (a) {} else if (b) {} else {}";
  auto m = metrics_of(src);
  CHECK(m.control_structure_density == doctest::Approx(std::log(4.0 / 2.0)));
}

TEST_CASE("ternary counting distinguishes cases and generics noise") {
  auto m = metrics_of("int a = c ? 1 : 2;\n");
  CHECK(m.ternary_operator_density == doctest::Approx(std::log(2.0 / 2.0)));
  auto none = metrics_of("switch (x) { case 1: break; }\n");
  CHECK(none.ternary_operator_density == doctest::Approx(std::log(1.0 / 2.0)));
}

TEST_CASE("tab indentation ratio") {
  std::string src = "\tint a;\n  int b;\n\tint c;\nint d;\n";
  auto m = metrics_of(src);
  CHECK(m.tab_indent_ratio == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("empty line counting treats whitespace-only lines as empty") {
  std::string src = "int a;\n\n   \nint b;\n";
  auto m = metrics_of(src);
  CHECK(m.empty_line_density == doctest::Approx(std::log(3.0 / 5.0)));
}

TEST_CASE("macro density excludes includes") {
  std::string src = "#include <a>\n#define B 1\n#pragma once\n";
  auto m = metrics_of(src);
  CHECK(m.macro_density == doctest::Approx(std::log(3.0 / 4.0)));
}

TEST_CASE("line length histogram bins by tens and normalizes") {
  std::string src = std::string(5, 'a') + "\n" + std::string(25, 'b') + "\n" +
                    std::string(200, 'c') + "\n" + std::string(7, 'd') + "\n";
  auto m = metrics_of(src);
  CHECK(m.line_length_histogram[0] == doctest::Approx(0.5));
  CHECK(m.line_length_histogram[2] == doctest::Approx(0.25));
  CHECK(m.line_length_histogram[15] == doctest::Approx(0.25));
  double sum = 0;
  for (double b : m.line_length_histogram) sum += b;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("doubling a file moves densities by less than ln 2 and keeps ratios") {
  std::string src =
      "#include <cstdio>\n"
      "\n"
      "int total(int n) {\n"
      "\tint s = 0;\n"
      "\tfor (int i = 0; i < n; i++) { s += i; }\n"
      "\treturn s; // sum\n"
      "}\n";
  auto once = metrics_of(src);
  auto twice = metrics_of(src + src);
  const double ln2 = std::log(2.0);
  auto densities = [](const LayoutMetrics& m) {
    return std::vector<double>{m.control_structure_density, m.ternary_operator_density,
                               m.token_density, m.comment_density, m.literal_density,
                               m.keyword_density, m.function_density, m.macro_density,
                               m.tab_density, m.space_density, m.empty_line_density};
  };
  auto d1 = densities(once);
  auto d2 = densities(twice);
  for (std::size_t i = 0; i < d1.size(); ++i) {
    CHECK(std::fabs(d2[i] - d1[i]) < ln2);
  }
  for (std::size_t i = 0; i < kLineHistogramBins; ++i) {
    CHECK(twice.line_length_histogram[i] ==
          doctest::Approx(once.line_length_histogram[i]).epsilon(1e-12));
  }
  CHECK(twice.newline_before_open_brace_ratio ==
        doctest::Approx(once.newline_before_open_brace_ratio).epsilon(1e-12));
  CHECK(twice.tab_indent_ratio == doctest::Approx(once.tab_indent_ratio).epsilon(1e-12));
}

TEST_CASE("all metrics finite on arbitrary input") {
  Rng rng(5150);
  for (int iter = 0; iter < 200; ++iter) {
    auto src = testsupport::random_snippet(rng, 300);
    auto m = metrics_of(src);
    for (double v : all_scalars(m)) {
      CHECK(std::isfinite(v));
    }
  }
}
