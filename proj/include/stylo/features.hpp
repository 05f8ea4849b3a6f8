#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stylo/language.hpp"
#include "stylo/layout.hpp"
#include "stylo/lexical.hpp"
#include "stylo/syntax.hpp"

namespace stylo {

enum class Label : std::uint8_t { human, llm, unlabeled };

const char* label_name(Label l);
Label label_from_name(const std::string& name);

// Per-file extraction result prior to vectorization. Cross-validation works
// on these so the vocabulary can be refit per training fold.
struct FileFeatures {
  std::string path;
  Label label = Label::unlabeled;
  LexicalProfile lexical;
  LayoutMetrics layout;
  SyntaxMetrics syntax;
};

FileFeatures extract_file(const std::string& source, const LanguageProfile& profile,
                          const std::string& path, Label label = Label::unlabeled);

// Recursively extracts every matching-extension file under `dir`, sorted by
// relative path; `jobs` worker threads, output order independent of jobs.
std::vector<FileFeatures> extract_dir(const std::string& dir,
                                      const LanguageProfile& profile, Label label,
                                      std::size_t jobs = 1);

struct EmptyCorpus : std::runtime_error {
  EmptyCorpus() : std::runtime_error("empty corpus") {}
};

// Per-category word lists with a minimum-document-frequency cutoff. Word
// order: descending document frequency, ties lexicographic — stable across
// runs for the same corpus.
struct Vocabulary {
  std::size_t min_doc_freq = 2;
  std::array<std::vector<std::pair<std::string, std::size_t>>, kLexCategoryCount>
      categories;  // (word, doc freq)
};

Vocabulary build_vocabulary(const std::vector<const LexicalProfile*>& corpus,
                            std::size_t min_doc_freq);
Vocabulary build_vocabulary(const std::vector<FileFeatures>& corpus,
                            std::size_t min_doc_freq);

void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

// One labeled row; `values` is ordered per the dataset schema.
struct FeatureRow {
  std::string path;
  Label label = Label::unlabeled;
  std::vector<double> values;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<FeatureRow> rows;

  std::uint64_t fingerprint() const;
};

// The fixed, vocabulary-dependent feature name list. All vectors assembled
// against one vocabulary share it.
std::vector<std::string> schema_names(const Vocabulary& vocab);

FeatureRow assemble(const FileFeatures& file, const Vocabulary& vocab);

Dataset assemble_dataset(const std::vector<FileFeatures>& files, const Vocabulary& vocab);

enum class FeatureGroup : std::uint8_t { lexical, layout, all };

const char* feature_group_name(FeatureGroup g);
FeatureGroup feature_group_from_name(const std::string& name);

// Slice selection by feature name. lexical and layout partition `all`.
std::vector<std::size_t> group_indices(const std::vector<std::string>& names,
                                       FeatureGroup group);
Dataset apply_group(const Dataset& data, FeatureGroup group);

void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

}  // namespace stylo
