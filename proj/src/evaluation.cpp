#include "stylo/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "stylo/text.hpp"

namespace stylo {

namespace {

// Exact fraction over 128-bit integers. The weighted metric sums stay small
// (two classes), so this never overflows in practice; every operation
// normalizes by the gcd.
struct Frac {
  __int128 num = 0;
  __int128 den = 1;

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    if (den < 0) {
      den = -den;
      num = -num;
    }
    __int128 g = gcd128(num, den);
    num /= g;
    den /= g;
  }

  Frac& add(Frac other) {
    num = num * other.den + other.num * den;
    den = den * other.den;
    normalize();
    return *this;
  }

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

Frac frac(std::size_t num, std::size_t den) {
  Frac f;
  f.num = static_cast<__int128>(num);
  f.den = static_cast<__int128>(den == 0 ? 1 : den);
  if (den == 0) f.num = 0;
  f.normalize();
  return f;
}

Frac scaled(Frac f, std::size_t k) {
  f.num *= static_cast<__int128>(k);
  f.normalize();
  return f;
}

Frac divided(Frac f, std::size_t k) {
  f.den *= static_cast<__int128>(k == 0 ? 1 : k);
  f.normalize();
  return f;
}

}  // namespace

Evaluation evaluate_detailed(const std::vector<std::pair<Label, Label>>& gold_pred) {
  if (gold_pred.empty()) throw EmptyPredictions();
  Evaluation out;
  std::map<Label, ClassMetrics> cls;
  for (const auto& [gold, pred] : gold_pred) {
    cls[gold].support += 1;
    cls[pred].predicted += 1;
    if (gold == pred) cls[gold].true_positives += 1;
  }
  std::size_t total = gold_pred.size();

  Frac w_precision, w_recall, w_f1, accuracy;
  for (auto& [label, c] : cls) {
    // exact per-class fractions; f1 = 2pr/(p+r) simplifies to 2tp/(pp+supp)
    Frac p = frac(c.true_positives, c.predicted);
    Frac r = frac(c.true_positives, c.support);
    Frac f1 = frac(2 * c.true_positives, c.predicted + c.support);
    c.precision = p.to_double();
    c.recall = r.to_double();
    c.f1 = f1.to_double();
    if (c.support > 0) {
      w_precision.add(divided(scaled(p, c.support), total));
      w_recall.add(divided(scaled(r, c.support), total));
      w_f1.add(divided(scaled(f1, c.support), total));
      accuracy.add(frac(c.true_positives, total));
    }
  }
  out.weighted.accuracy = accuracy.to_double();
  out.weighted.precision = w_precision.to_double();
  out.weighted.recall = w_recall.to_double();
  out.weighted.f_measure = w_f1.to_double();
  out.per_class = std::move(cls);
  return out;
}

Metrics evaluate(const std::vector<std::pair<Label, Label>>& gold_pred) {
  return evaluate_detailed(gold_pred).weighted;
}

std::vector<std::size_t> stratified_folds(const std::vector<Label>& labels,
                                          std::size_t folds, std::uint64_t seed) {
  std::vector<std::size_t> assignment(labels.size(), 0);
  Rng rng(seed);
  for (Label cls : {Label::human, Label::llm, Label::unlabeled}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    if (members.empty()) continue;
    rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j) {
      assignment[members[j]] = j % folds;
    }
  }
  return assignment;
}

Metrics cross_validate(const ModelSpec& spec, const std::vector<FileFeatures>& data,
                       std::size_t folds, std::uint64_t seed, FeatureGroup group,
                       std::size_t min_doc_freq) {
  if (folds < 2) throw TooFewExamples("folds must be at least 2");
  std::size_t n_human = 0, n_llm = 0;
  std::vector<Label> labels;
  labels.reserve(data.size());
  for (const auto& f : data) {
    labels.push_back(f.label);
    if (f.label == Label::human) ++n_human;
    if (f.label == Label::llm) ++n_llm;
  }
  if (n_human < folds || n_llm < folds) {
    throw TooFewExamples("each class needs at least `folds` examples");
  }

  auto fold_of = stratified_folds(labels, folds, seed);
  std::vector<std::pair<Label, Label>> pooled;
  pooled.reserve(data.size());

  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < data.size(); ++i) {
      (fold_of[i] == f ? test_idx : train_idx).push_back(i);
    }
    // no leakage: vocabulary comes from the training fold only
    std::vector<const LexicalProfile*> train_lex;
    train_lex.reserve(train_idx.size());
    for (std::size_t i : train_idx) train_lex.push_back(&data[i].lexical);
    Vocabulary vocab = build_vocabulary(train_lex, min_doc_freq);
    auto names = schema_names(vocab);
    Dataset train_full, test_full;
    train_full.feature_names = names;
    test_full.feature_names = names;
    for (std::size_t i : train_idx) train_full.rows.push_back(assemble(data[i], vocab));
    for (std::size_t i : test_idx) test_full.rows.push_back(assemble(data[i], vocab));
    Dataset train_set = apply_group(train_full, group);
    Dataset test_set = apply_group(test_full, group);
    ModelSpec fold_spec = spec;
    fold_spec.seed = derive_seed(seed, 100 + f);
    TrainedModel model = train(fold_spec, train_set);
    std::uint64_t fp = test_set.fingerprint();
    for (std::size_t i = 0; i < test_set.rows.size(); ++i) {
      auto pred = predict(model, test_set.rows[i].values, fp);
      pooled.emplace_back(test_set.rows[i].label, pred.label);
    }
  }
  return evaluate(pooled);
}

EvalReport ablate(const std::vector<FileFeatures>& data,
                  const std::array<ModelSpec, kAblateAlgos>& specs,
                  const std::array<std::string, kAblateAlgos>& names,
                  std::size_t folds, std::uint64_t seed, std::size_t min_doc_freq) {
  EvalReport report;
  report.algorithm_names = names;
  report.folds = folds;
  report.seed = seed;
  report.n_files = data.size();
  for (const auto& f : data) {
    if (f.label == Label::human) ++report.n_human;
    if (f.label == Label::llm) ++report.n_llm;
  }
  for (std::size_t a = 0; a < kAblateAlgos; ++a) {
    for (std::size_t g = 0; g < kAblateGroups; ++g) {
      report.cells[a][g] =
          cross_validate(specs[a], data, folds, seed, report.groups[g], min_doc_freq);
    }
  }
  return report;
}

namespace {

std::string fixed3(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3) << v;
  return ss.str();
}

}  // namespace

std::string render_eval_text(const EvalReport& report) {
  std::ostringstream out;
  if (!report.config_echo.empty()) {
    out << "# config: " << report.config_echo << "\n";
  }
  out << "# files=" << report.n_files << " human=" << report.n_human
      << " llm=" << report.n_llm << " folds=" << report.folds
      << " seed=" << report.seed << "\n";
  const int name_w = 16;
  out << std::left << std::setw(name_w) << "Algorithm";
  for (FeatureGroup g : report.groups) {
    std::string head = feature_group_name(g);
    out << "| " << std::left << std::setw(4 * 7 - 2) << head;
  }
  out << "\n" << std::setw(name_w) << "";
  for (std::size_t g = 0; g < kAblateGroups; ++g) {
    out << "| " << std::left << std::setw(7 - 1) << "Acc" << std::setw(7 - 1) << "Prec"
        << std::setw(7 - 1) << "Rec" << std::setw(7 + 1) << "F-Meas";
  }
  out << "\n";
  for (std::size_t a = 0; a < kAblateAlgos; ++a) {
    out << std::left << std::setw(name_w) << report.algorithm_names[a];
    for (std::size_t g = 0; g < kAblateGroups; ++g) {
      const Metrics& m = report.cells[a][g];
      out << "| " << std::setw(6) << fixed3(m.accuracy) << std::setw(6)
          << fixed3(m.precision) << std::setw(6) << fixed3(m.recall) << std::setw(8)
          << fixed3(m.f_measure);
    }
    out << "\n";
  }
  return out.str();
}

std::string render_eval_csv(const EvalReport& report) {
  std::ostringstream out;
  if (!report.config_echo.empty()) {
    out << "# config: " << report.config_echo << "\n";
  }
  out << "algorithm,group,accuracy,precision,recall,f_measure\n";
  for (std::size_t a = 0; a < kAblateAlgos; ++a) {
    for (std::size_t g = 0; g < kAblateGroups; ++g) {
      const Metrics& m = report.cells[a][g];
      out << csv_quote(report.algorithm_names[a]) << ','
          << feature_group_name(report.groups[g]) << ',' << format_double(m.accuracy)
          << ',' << format_double(m.precision) << ',' << format_double(m.recall) << ','
          << format_double(m.f_measure) << "\n";
    }
  }
  return out.str();
}

FreqDiffReport freq_diff(const std::vector<const LexicalProfile*>& corpus_a,
                         const std::vector<const LexicalProfile*>& corpus_b,
                         LexCategory category) {
  if (corpus_a.empty() || corpus_b.empty()) throw EmptyCorpus();
  auto corpus_freq = [&](const std::vector<const LexicalProfile*>& corpus) {
    std::map<std::string, double> sums;
    std::size_t files_with_category = 0;
    for (const LexicalProfile* lex : corpus) {
      const auto& cat = lex->category(category);
      if (cat.total == 0) continue;
      ++files_with_category;
      for (const auto& [w, f] : cat.tf) sums[w] += f;
    }
    if (files_with_category > 0) {
      for (auto& [w, s] : sums) s /= static_cast<double>(files_with_category);
    }
    return sums;
  };
  auto fa = corpus_freq(corpus_a);
  auto fb = corpus_freq(corpus_b);

  FreqDiffReport report;
  auto consider = [&](const std::string& token) {
    double a = fa.count(token) ? fa[token] : 0.0;
    double b = fb.count(token) ? fb[token] : 0.0;
    double hi = std::max(a, b);
    if (hi <= 0.0) return;
    double rel = std::fabs(a - b) / hi;
    if (rel > 0.5) {
      report.rows.push_back({token, std::string(lex_category_name(category)), a, b, rel});
    }
  };
  for (const auto& [w, f] : fa) consider(w);
  for (const auto& [w, f] : fb) {
    if (!fa.count(w)) consider(w);
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const FreqDiffRow& x, const FreqDiffRow& y) {
              if (x.relative_difference != y.relative_difference) {
                return x.relative_difference > y.relative_difference;
              }
              return x.token < y.token;
            });
  return report;
}

FreqDiffReport freq_diff(const std::vector<FileFeatures>& corpus_a,
                         const std::vector<FileFeatures>& corpus_b,
                         LexCategory category) {
  std::vector<const LexicalProfile*> a, b;
  for (const auto& f : corpus_a) a.push_back(&f.lexical);
  for (const auto& f : corpus_b) b.push_back(&f.lexical);
  return freq_diff(a, b, category);
}

std::string render_freq_diff_text(const FreqDiffReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(28) << "token" << std::setw(20) << "category"
      << std::right << std::setw(12) << "freq_a" << std::setw(12) << "freq_b"
      << std::setw(12) << "rel_diff" << "\n";
  for (const auto& row : report.rows) {
    out << std::left << std::setw(28) << row.token << std::setw(20) << row.category
        << std::right << std::setw(12) << fixed3(row.freq_a) << std::setw(12)
        << fixed3(row.freq_b) << std::setw(12) << fixed3(row.relative_difference)
        << "\n";
  }
  return out.str();
}

std::string render_freq_diff_csv(const FreqDiffReport& report) {
  std::ostringstream out;
  out << "token,category,freq_a,freq_b,relative_difference\n";
  for (const auto& row : report.rows) {
    out << csv_quote(row.token) << ',' << row.category << ','
        << format_double(row.freq_a) << ',' << format_double(row.freq_b) << ','
        << format_double(row.relative_difference) << "\n";
  }
  return out.str();
}

}  // namespace stylo
