#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylo/language.hpp"
#include "stylo/layout.hpp"
#include "stylo/lexical.hpp"
#include "stylo/syntax.hpp"
#include "stylo/text.hpp"
#include "stylo/tokenizer.hpp"
#include "helpers.hpp"

namespace testsupport {

// Compares library extraction against the frozen oracle values for the 20
// golden fixtures. Returns one message per mismatch; empty means pass.
inline std::vector<std::string> golden_mismatches(double tol = 1e-9) {
  using nlohmann::json;
  namespace sl = stylo;
  std::vector<std::string> bad;

  std::string golden_dir = fixture("golden");
  json expected = json::parse(std::ifstream(golden_dir + "/expected.json"));

  for (auto& [rel, exp] : expected.items()) {
    std::string lang = exp["language"];
    const auto& profile = sl::builtin_profile(lang);
    std::string src = sl::read_file(golden_dir + "/" + rel);
    auto stream = sl::tokenize(src, profile, rel);
    auto lex = sl::lexical_profile(stream, profile);
    auto tree = sl::parse_syntax(stream, profile);
    auto syn = sl::syntax_metrics(tree, stream);
    auto lay = sl::layout_metrics(src, stream, sl::count_functions(tree));

    auto fail = [&](const std::string& what, double got, double want) {
      std::ostringstream ss;
      ss << rel << ": " << what << " got " << sl::format_double(got) << " want "
         << sl::format_double(want);
      bad.push_back(ss.str());
    };
    auto check = [&](const std::string& what, double got, double want) {
      if (std::fabs(got - want) > tol) fail(what, got, want);
    };

    check("line_count", double(stream.line_count), exp["line_count"].get<double>());
    check("char_count", double(stream.char_count), exp["char_count"].get<double>());

    // lexical: every TF in both directions
    static const char* cat_names[] = {"comments_strings", "identifiers", "keywords",
                                      "imports"};
    for (std::size_t c = 0; c < sl::kLexCategoryCount; ++c) {
      const auto& got = lex.categories[c];
      const auto& want = exp["lexical"][cat_names[c]];
      check(std::string(cat_names[c]) + ".total", double(got.total),
            want["total"].get<double>());
      const auto& wtf = want["tf"];
      if (got.tf.size() != wtf.size()) {
        fail(std::string(cat_names[c]) + ".tf size", double(got.tf.size()),
             double(wtf.size()));
      }
      for (auto& [word, freq] : wtf.items()) {
        auto it = got.tf.find(word);
        if (it == got.tf.end()) {
          bad.push_back(rel + ": missing tf word " + word);
        } else {
          check(std::string(cat_names[c]) + ".tf." + word, it->second,
                freq.get<double>());
        }
      }
    }

    const auto& wl = exp["layout"];
    check("control_structure_density", lay.control_structure_density,
          wl["control_structure_density"].get<double>());
    check("ternary_operator_density", lay.ternary_operator_density,
          wl["ternary_operator_density"].get<double>());
    check("token_density", lay.token_density, wl["token_density"].get<double>());
    check("comment_density", lay.comment_density, wl["comment_density"].get<double>());
    check("literal_density", lay.literal_density, wl["literal_density"].get<double>());
    check("keyword_density", lay.keyword_density, wl["keyword_density"].get<double>());
    check("function_density", lay.function_density, wl["function_density"].get<double>());
    check("macro_density", lay.macro_density, wl["macro_density"].get<double>());
    check("tab_density", lay.tab_density, wl["tab_density"].get<double>());
    check("space_density", lay.space_density, wl["space_density"].get<double>());
    check("empty_line_density", lay.empty_line_density,
          wl["empty_line_density"].get<double>());
    check("avg_line_length", lay.avg_line_length, wl["avg_line_length"].get<double>());
    check("line_length_stddev", lay.line_length_stddev,
          wl["line_length_stddev"].get<double>());
    check("whitespace_ratio", lay.whitespace_ratio,
          wl["whitespace_ratio"].get<double>());
    check("newline_before_open_brace_ratio", lay.newline_before_open_brace_ratio,
          wl["newline_before_open_brace_ratio"].get<double>());
    check("tab_indent_ratio", lay.tab_indent_ratio,
          wl["tab_indent_ratio"].get<double>());
    for (std::size_t i = 0; i < sl::kLineHistogramBins; ++i) {
      check("histogram[" + std::to_string(i) + "]", lay.line_length_histogram[i],
            wl["line_length_histogram"][i].get<double>());
    }

    const auto& ws = exp["syntax"];
    check("max_nesting_depth", double(syn.max_nesting_depth),
          ws["max_nesting_depth"].get<double>());
    check("max_ast_depth", double(syn.max_ast_depth), ws["max_ast_depth"].get<double>());
    check("avg_branching_factor", syn.avg_branching_factor,
          ws["avg_branching_factor"].get<double>());
    check("avg_params_per_function", syn.avg_params_per_function,
          ws["avg_params_per_function"].get<double>());
    check("param_count_stddev", syn.param_count_stddev,
          ws["param_count_stddev"].get<double>());
    check("avg_leaf_depth", syn.avg_leaf_depth, ws["avg_leaf_depth"].get<double>());

    for (std::size_t i = 0; i < sl::kNodeTypeCount; ++i) {
      const char* name = sl::node_type_name(sl::all_node_types()[i]);
      check(std::string("avg_depth.") + name, syn.avg_depth_per_type[i],
            ws["avg_depth_per_type"][name].get<double>());
    }

    const auto& wbig = ws["bigram_freq"];
    if (syn.bigram_freq.size() != wbig.size()) {
      fail("bigram count", double(syn.bigram_freq.size()), double(wbig.size()));
    }
    for (const auto& [edge, freq] : syn.bigram_freq) {
      std::string key = std::string(sl::node_type_name(edge.first)) + ">" +
                        sl::node_type_name(edge.second);
      if (!wbig.contains(key)) {
        bad.push_back(rel + ": unexpected bigram " + key);
      } else {
        check("bigram." + key, freq, wbig[key].get<double>());
      }
    }

    const auto& wkw = ws["keyword_freq"];
    if (syn.keyword_freq.size() != wkw.size()) {
      fail("keyword_freq count", double(syn.keyword_freq.size()), double(wkw.size()));
    }
    for (const auto& [word, freq] : syn.keyword_freq) {
      if (!wkw.contains(word)) {
        bad.push_back(rel + ": unexpected keyword " + word);
      } else {
        check("keyword_freq." + word, freq, wkw[word].get<double>());
      }
    }
  }
  return bad;
}

}  // namespace testsupport
