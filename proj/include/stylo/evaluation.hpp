#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stylo/classifier.hpp"
#include "stylo/features.hpp"
#include "stylo/lexical.hpp"

namespace stylo {

struct EmptyPredictions : std::runtime_error {
  EmptyPredictions() : std::runtime_error("no predictions to evaluate") {}
};

struct TooFewExamples : std::runtime_error {
  explicit TooFewExamples(const std::string& why)
      : std::runtime_error("too few examples: " + why) {}
};

// Support-weighted averages over the per-class metrics. The internal
// arithmetic is exact (integer fractions), so accuracy equals weighted
// recall bit for bit.
struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

struct ClassMetrics {
  std::size_t support = 0;
  std::size_t predicted = 0;
  std::size_t true_positives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Evaluation {
  Metrics weighted;
  std::map<Label, ClassMetrics> per_class;
};

Evaluation evaluate_detailed(const std::vector<std::pair<Label, Label>>& gold_pred);
Metrics evaluate(const std::vector<std::pair<Label, Label>>& gold_pred);

// Stratified k-fold cross-validation over raw per-file features. The
// vocabulary (and any feature standardization inside the model) is refit on
// each training fold; metrics are pooled over all held-out predictions.
Metrics cross_validate(const ModelSpec& spec, const std::vector<FileFeatures>& data,
                       std::size_t folds, std::uint64_t seed,
                       FeatureGroup group = FeatureGroup::all,
                       std::size_t min_doc_freq = 2);

// Deterministic stratified fold assignment; exposed for tests.
std::vector<std::size_t> stratified_folds(const std::vector<Label>& labels,
                                          std::size_t folds, std::uint64_t seed);

constexpr std::size_t kAblateAlgos = 4;
constexpr std::size_t kAblateGroups = 3;  // lexical, layout, all

struct EvalReport {
  std::array<std::string, kAblateAlgos> algorithm_names;
  std::array<FeatureGroup, kAblateGroups> groups = {
      FeatureGroup::lexical, FeatureGroup::layout, FeatureGroup::all};
  std::array<std::array<Metrics, kAblateGroups>, kAblateAlgos> cells;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::size_t n_files = 0;
  std::size_t n_human = 0;
  std::size_t n_llm = 0;
  std::string config_echo;  // semantic run parameters, embedded in reports
};

EvalReport ablate(const std::vector<FileFeatures>& data,
                  const std::array<ModelSpec, kAblateAlgos>& specs,
                  const std::array<std::string, kAblateAlgos>& names,
                  std::size_t folds, std::uint64_t seed, std::size_t min_doc_freq = 2);

std::string render_eval_text(const EvalReport& report);
std::string render_eval_csv(const EvalReport& report);

struct FreqDiffRow {
  std::string token;
  std::string category;
  double freq_a = 0.0;
  double freq_b = 0.0;
  double relative_difference = 0.0;
};

struct FreqDiffReport {
  std::vector<FreqDiffRow> rows;  // reldiff > 0.5, descending, ties by token
};

// Corpus-level frequency = mean per-file TF over the files where the
// category is non-empty; relative difference = |fA-fB| / max(fA,fB).
FreqDiffReport freq_diff(const std::vector<const LexicalProfile*>& corpus_a,
                         const std::vector<const LexicalProfile*>& corpus_b,
                         LexCategory category);
FreqDiffReport freq_diff(const std::vector<FileFeatures>& corpus_a,
                         const std::vector<FileFeatures>& corpus_b,
                         LexCategory category);

std::string render_freq_diff_text(const FreqDiffReport& report);
std::string render_freq_diff_csv(const FreqDiffReport& report);

}  // namespace stylo
