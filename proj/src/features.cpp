#include "stylo/features.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "stylo/text.hpp"
#include "stylo/tokenizer.hpp"

namespace stylo {

namespace fs = std::filesystem;

const char* label_name(Label l) {
  switch (l) {
    case Label::human: return "human";
    case Label::llm: return "llm";
    case Label::unlabeled: return "unlabeled";
  }
  return "?";
}

Label label_from_name(const std::string& name) {
  if (name == "human") return Label::human;
  if (name == "llm") return Label::llm;
  if (name == "unlabeled") return Label::unlabeled;
  throw std::runtime_error("unknown label: " + name);
}

FileFeatures extract_file(const std::string& source, const LanguageProfile& profile,
                          const std::string& path, Label label) {
  FileFeatures out;
  out.path = path;
  out.label = label;
  auto stream = tokenize(source, profile, path);
  out.lexical = lexical_profile(stream, profile);
  auto tree = parse_syntax(stream, profile);
  out.syntax = syntax_metrics(tree, stream);
  out.layout = layout_metrics(source, stream, count_functions(tree));
  return out;
}

namespace {

bool matches_language(const fs::path& p, const std::string& lang) {
  auto ext = p.extension().string();
  if (lang == "cpp") {
    return ext == ".cpp" || ext == ".cc" || ext == ".cxx" || ext == ".hpp" ||
           ext == ".h" || ext == ".hh";
  }
  if (lang == "java") return ext == ".java";
  return false;
}

}  // namespace

std::vector<FileFeatures> extract_dir(const std::string& dir,
                                      const LanguageProfile& profile, Label label,
                                      std::size_t jobs) {
  std::vector<std::string> rel_paths;
  fs::path root(dir);
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    if (!matches_language(entry.path(), profile.id)) continue;
    rel_paths.push_back(fs::relative(entry.path(), root).generic_string());
  }
  std::sort(rel_paths.begin(), rel_paths.end());

  std::vector<FileFeatures> out(rel_paths.size());
  if (jobs == 0) jobs = 1;
  jobs = std::min(jobs, rel_paths.size() > 0 ? rel_paths.size() : std::size_t(1));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= rel_paths.size()) return;
      std::string source = read_file((root / rel_paths[i]).string());
      out[i] = extract_file(source, profile, rel_paths[i], label);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

Vocabulary build_vocabulary(const std::vector<const LexicalProfile*>& corpus,
                            std::size_t min_doc_freq) {
  if (corpus.empty()) throw EmptyCorpus();
  if (min_doc_freq < 1) min_doc_freq = 1;
  Vocabulary vocab;
  vocab.min_doc_freq = min_doc_freq;
  for (std::size_t c = 0; c < kLexCategoryCount; ++c) {
    std::map<std::string, std::size_t> doc_freq;
    for (const LexicalProfile* lex : corpus) {
      for (const auto& [word, n] : lex->categories[c].counts) {
        (void)n;
        doc_freq[word] += 1;  // distinct files containing the word
      }
    }
    auto& list = vocab.categories[c];
    for (const auto& [word, df] : doc_freq) {
      if (df >= min_doc_freq) list.emplace_back(word, df);
    }
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
  }
  return vocab;
}

Vocabulary build_vocabulary(const std::vector<FileFeatures>& corpus,
                            std::size_t min_doc_freq) {
  std::vector<const LexicalProfile*> ptrs;
  ptrs.reserve(corpus.size());
  for (const auto& f : corpus) ptrs.push_back(&f.lexical);
  return build_vocabulary(ptrs, min_doc_freq);
}

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ostringstream out;
  out << "# stylo-vocab v1\n";
  out << "# min_doc_freq " << vocab.min_doc_freq << "\n";
  for (std::size_t c = 0; c < kLexCategoryCount; ++c) {
    const char* cat = lex_category_name(static_cast<LexCategory>(c));
    for (const auto& [word, df] : vocab.categories[c]) {
      out << cat << '\t' << word << '\t' << df << '\n';
    }
  }
  write_file(path, out.str());
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "# stylo-vocab v1") {
    throw std::runtime_error("bad vocabulary header in " + path);
  }
  Vocabulary vocab;
  if (std::getline(in, line) && starts_with(line, "# min_doc_freq ")) {
    vocab.min_doc_freq = std::stoul(line.substr(15));
  }
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_char(line, '\t');
    if (fields.size() != 3) throw std::runtime_error("bad vocabulary line: " + line);
    for (std::size_t c = 0; c < kLexCategoryCount; ++c) {
      if (fields[0] == lex_category_name(static_cast<LexCategory>(c))) {
        vocab.categories[c].emplace_back(fields[1], std::stoul(fields[2]));
      }
    }
  }
  return vocab;
}

std::uint64_t Dataset::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& name : feature_names) {
    h = fnv1a64(name, h);
    h = fnv1a64("\n", h);
  }
  return h;
}

std::vector<std::string> schema_names(const Vocabulary& vocab) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < kLexCategoryCount; ++c) {
    std::string prefix = std::string("lex.") +
                         lex_category_name(static_cast<LexCategory>(c)) + ".";
    for (const auto& [word, df] : vocab.categories[c]) {
      (void)df;
      names.push_back(prefix + word);
    }
  }
  for (const char* s :
       {"control_structure_density", "ternary_operator_density", "token_density",
        "comment_density", "literal_density", "keyword_density", "function_density",
        "macro_density", "tab_density", "space_density", "empty_line_density",
        "avg_line_length", "line_length_stddev", "whitespace_ratio",
        "newline_before_open_brace_ratio", "tab_indent_ratio"}) {
    names.push_back(std::string("layout.") + s);
  }
  for (std::size_t i = 0; i < kLineHistogramBins; ++i) {
    names.push_back("layout.hist." + std::string(i < 10 ? "0" : "") + std::to_string(i));
  }
  for (const char* s : {"max_nesting_depth", "avg_branching_factor",
                        "avg_params_per_function", "param_count_stddev",
                        "max_ast_depth", "avg_leaf_depth"}) {
    names.push_back(std::string("ast.") + s);
  }
  for (NodeType t : all_node_types()) {
    names.push_back(std::string("ast.depth.") + node_type_name(t));
  }
  for (NodeType a : all_node_types()) {
    for (NodeType b : all_node_types()) {
      names.push_back(std::string("ast.bigram.") + node_type_name(a) + "__" +
                      node_type_name(b));
    }
  }
  const auto& kw = vocab.categories[static_cast<std::size_t>(LexCategory::Keywords)];
  for (const auto& [word, df] : kw) {
    (void)df;
    names.push_back("ast.kw." + word);
  }
  return names;
}

FeatureRow assemble(const FileFeatures& file, const Vocabulary& vocab) {
  FeatureRow row;
  row.path = file.path;
  row.label = file.label;
  auto& v = row.values;

  for (std::size_t c = 0; c < kLexCategoryCount; ++c) {
    const auto& tf = file.lexical.categories[c].tf;
    for (const auto& [word, df] : vocab.categories[c]) {
      (void)df;
      auto it = tf.find(word);
      v.push_back(it == tf.end() ? 0.0 : it->second);
    }
  }
  const LayoutMetrics& m = file.layout;
  for (double x : {m.control_structure_density, m.ternary_operator_density,
                   m.token_density, m.comment_density, m.literal_density,
                   m.keyword_density, m.function_density, m.macro_density,
                   m.tab_density, m.space_density, m.empty_line_density,
                   m.avg_line_length, m.line_length_stddev, m.whitespace_ratio,
                   m.newline_before_open_brace_ratio, m.tab_indent_ratio}) {
    v.push_back(x);
  }
  for (double x : m.line_length_histogram) v.push_back(x);

  const SyntaxMetrics& s = file.syntax;
  v.push_back(static_cast<double>(s.max_nesting_depth));
  v.push_back(s.avg_branching_factor);
  v.push_back(s.avg_params_per_function);
  v.push_back(s.param_count_stddev);
  v.push_back(static_cast<double>(s.max_ast_depth));
  v.push_back(s.avg_leaf_depth);
  for (double x : s.avg_depth_per_type) v.push_back(x);
  for (NodeType a : all_node_types()) {
    for (NodeType b : all_node_types()) {
      auto it = s.bigram_freq.find({a, b});
      v.push_back(it == s.bigram_freq.end() ? 0.0 : it->second);
    }
  }
  const auto& kw = vocab.categories[static_cast<std::size_t>(LexCategory::Keywords)];
  for (const auto& [word, df] : kw) {
    (void)df;
    auto it = s.keyword_freq.find(word);
    v.push_back(it == s.keyword_freq.end() ? 0.0 : it->second);
  }
  return row;
}

Dataset assemble_dataset(const std::vector<FileFeatures>& files, const Vocabulary& vocab) {
  Dataset data;
  data.feature_names = schema_names(vocab);
  data.rows.reserve(files.size());
  for (const auto& f : files) {
    data.rows.push_back(assemble(f, vocab));
  }
  return data;
}

const char* feature_group_name(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::lexical: return "lexical";
    case FeatureGroup::layout: return "layout";
    case FeatureGroup::all: return "all";
  }
  return "?";
}

FeatureGroup feature_group_from_name(const std::string& name) {
  if (name == "lexical") return FeatureGroup::lexical;
  if (name == "layout") return FeatureGroup::layout;
  if (name == "all") return FeatureGroup::all;
  throw std::runtime_error("unknown feature group: " + name);
}

std::vector<std::size_t> group_indices(const std::vector<std::string>& names,
                                       FeatureGroup group) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < names.size(); ++i) {
    bool lexical = starts_with(names[i], "lex.");
    if (group == FeatureGroup::all || (group == FeatureGroup::lexical) == lexical) {
      idx.push_back(i);
    }
  }
  return idx;
}

Dataset apply_group(const Dataset& data, FeatureGroup group) {
  if (group == FeatureGroup::all) return data;
  auto idx = group_indices(data.feature_names, group);
  Dataset out;
  out.feature_names.reserve(idx.size());
  for (std::size_t i : idx) out.feature_names.push_back(data.feature_names[i]);
  out.rows.reserve(data.rows.size());
  for (const auto& row : data.rows) {
    FeatureRow r;
    r.path = row.path;
    r.label = row.label;
    r.values.reserve(idx.size());
    for (std::size_t i : idx) r.values.push_back(row.values[i]);
    out.rows.push_back(std::move(r));
  }
  return out;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ostringstream out;
  for (const auto& name : data.feature_names) {
    out << csv_quote(name) << ',';
  }
  out << "label,path\n";
  for (const auto& row : data.rows) {
    for (double v : row.values) {
      out << format_double(v) << ',';
    }
    out << label_name(row.label) << ',' << csv_quote(row.path) << '\n';
  }
  write_file(path, out.str());
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = csv_split(line);
  if (header.size() < 2 || header[header.size() - 2] != "label" ||
      header.back() != "path") {
    throw std::runtime_error("dataset header must end with label,path: " + path);
  }
  Dataset data;
  data.feature_names.assign(header.begin(), header.end() - 2);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = csv_split(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("dataset row width mismatch in " + path);
    }
    FeatureRow row;
    row.values.reserve(data.feature_names.size());
    for (std::size_t i = 0; i + 2 < fields.size(); ++i) {
      row.values.push_back(parse_double(fields[i]));
    }
    row.label = label_from_name(fields[fields.size() - 2]);
    row.path = fields.back();
    data.rows.push_back(std::move(row));
  }
  return data;
}

}  // namespace stylo
