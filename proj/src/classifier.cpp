#include "stylo/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "stylo/text.hpp"

namespace stylo {

namespace {

double entropy2(std::size_t a, std::size_t b) {
  std::size_t n = a + b;
  if (n == 0 || a == 0 || b == 0) return 0.0;
  double pa = static_cast<double>(a) / static_cast<double>(n);
  double pb = static_cast<double>(b) / static_cast<double>(n);
  return -(pa * std::log2(pa) + pb * std::log2(pb));
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain_ratio = 0.0;
};

// Best threshold split by information gain ratio; ties broken by lowest
// feature index, then lowest threshold (candidates are scanned in that
// order, so strict improvement keeps the first best).
SplitChoice best_split(const Dataset& data, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& features,
                       std::size_t min_leaf) {
  SplitChoice best;
  std::size_t n = rows.size();
  std::size_t total_llm = 0;
  for (std::size_t r : rows) {
    if (data.rows[r].label == Label::llm) ++total_llm;
  }
  std::size_t total_human = n - total_llm;
  double parent_entropy = entropy2(total_human, total_llm);

  std::vector<std::pair<double, int>> column(n);  // (value, is_llm)
  for (std::size_t f : features) {
    for (std::size_t i = 0; i < n; ++i) {
      const FeatureRow& row = data.rows[rows[i]];
      column[i] = {row.values[f], row.label == Label::llm ? 1 : 0};
    }
    std::sort(column.begin(), column.end());
    if (column.front().first == column.back().first) continue;  // constant

    std::size_t left_llm = 0, left_n = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_llm += static_cast<std::size_t>(column[i].second);
      ++left_n;
      if (column[i].first == column[i + 1].first) continue;
      std::size_t right_n = n - left_n;
      if (left_n < min_leaf || right_n < min_leaf) continue;
      std::size_t right_llm = total_llm - left_llm;
      double wl = static_cast<double>(left_n) / static_cast<double>(n);
      double wr = static_cast<double>(right_n) / static_cast<double>(n);
      double gain = parent_entropy - wl * entropy2(left_n - left_llm, left_llm) -
                    wr * entropy2(right_n - right_llm, right_llm);
      if (gain <= 1e-12) continue;
      double split_info = -(wl * std::log2(wl) + wr * std::log2(wr));
      if (split_info <= 0.0) continue;
      double ratio = gain / split_info;
      if (!best.found || ratio > best.gain_ratio + 1e-15) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = (column[i].first + column[i + 1].first) / 2.0;
        best.gain_ratio = ratio;
      }
    }
  }
  return best;
}

struct TreeBuilder {
  const Dataset& data;
  const ModelSpec& spec;
  Rng* feature_rng;  // null = use every feature
  std::size_t n_features;
  DecisionTree tree;

  std::vector<std::size_t> pick_features() {
    std::vector<std::size_t> all(n_features);
    for (std::size_t i = 0; i < n_features; ++i) all[i] = i;
    std::size_t k = spec.features_per_split;
    if (feature_rng == nullptr || k == 0 || k >= n_features) return all;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + feature_rng->uniform_index(n_features - i);
      std::swap(all[i], all[j]);
    }
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
  }

  std::size_t build(const std::vector<std::size_t>& rows, std::size_t depth) {
    std::size_t idx = tree.nodes.size();
    tree.nodes.emplace_back();
    std::size_t llm = 0;
    for (std::size_t r : rows) {
      if (data.rows[r].label == Label::llm) ++llm;
    }
    tree.nodes[idx].count_llm = llm;
    tree.nodes[idx].count_human = rows.size() - llm;

    bool pure = llm == 0 || llm == rows.size();
    bool depth_capped = spec.max_depth != 0 && depth >= spec.max_depth;
    if (pure || depth_capped || rows.size() < 2 * spec.min_leaf) return idx;

    auto features = pick_features();
    SplitChoice split = best_split(data, rows, features, spec.min_leaf);
    if (!split.found) return idx;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      if (data.rows[r].values[static_cast<std::size_t>(split.feature)] <=
          split.threshold) {
        left_rows.push_back(r);
      } else {
        right_rows.push_back(r);
      }
    }
    tree.nodes[idx].feature = split.feature;
    tree.nodes[idx].threshold = split.threshold;
    std::size_t left = build(left_rows, depth + 1);
    std::size_t right = build(right_rows, depth + 1);
    tree.nodes[idx].left = left;
    tree.nodes[idx].right = right;
    return idx;
  }
};

void standardize_fit(const Dataset& data, LinearModel& m) {
  std::size_t d = data.feature_names.size();
  std::size_t n = data.rows.size();
  m.mean.assign(d, 0.0);
  m.scale.assign(d, 0.0);
  for (const auto& row : data.rows) {
    for (std::size_t f = 0; f < d; ++f) m.mean[f] += row.values[f];
  }
  for (std::size_t f = 0; f < d; ++f) m.mean[f] /= static_cast<double>(n);
  for (const auto& row : data.rows) {
    for (std::size_t f = 0; f < d; ++f) {
      double diff = row.values[f] - m.mean[f];
      m.scale[f] += diff * diff;
    }
  }
  for (std::size_t f = 0; f < d; ++f) {
    double sd = std::sqrt(m.scale[f] / static_cast<double>(n));
    m.scale[f] = sd < 1e-12 ? 0.0 : sd;  // constant feature -> z = 0
  }
}

std::vector<double> standardize_row(const LinearModel& m, const std::vector<double>& x) {
  std::vector<double> z(x.size());
  for (std::size_t f = 0; f < x.size(); ++f) {
    z[f] = m.scale[f] == 0.0 ? 0.0 : (x[f] - m.mean[f]) / m.scale[f];
  }
  return z;
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

void check_trainable(const Dataset& data) {
  if (data.rows.size() < 2) throw DegenerateData();
  bool has_h = false, has_l = false;
  for (const auto& row : data.rows) {
    if (row.label == Label::human) has_h = true;
    if (row.label == Label::llm) has_l = true;
  }
  if (!has_h || !has_l) throw DegenerateData();
}

TrainedModel train_logistic(const ModelSpec& spec, const Dataset& data) {
  TrainedModel model;
  model.kind = ModelKind::logistic;
  standardize_fit(data, model.linear);
  std::size_t d = data.feature_names.size();
  std::size_t n = data.rows.size();
  std::vector<std::vector<double>> z(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = standardize_row(model.linear, data.rows[i].values);
    y[i] = data.rows[i].label == Label::llm ? 1 : 0;
  }
  std::vector<double>& w = model.linear.weights;
  w.assign(d, 0.0);
  double& b = model.linear.bias;
  Rng rng(spec.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      double g = sigmoid(std::inner_product(z[i].begin(), z[i].end(), w.begin(), b)) -
                 static_cast<double>(y[i]);
      for (std::size_t f = 0; f < d; ++f) {
        w[f] -= spec.learning_rate * (g * z[i][f] + spec.l2 * w[f]);
      }
      b -= spec.learning_rate * g;
    }
  }
  return model;
}

TrainedModel train_svm(const ModelSpec& spec, const Dataset& data) {
  TrainedModel model;
  model.kind = ModelKind::svm;
  standardize_fit(data, model.linear);
  std::size_t d = data.feature_names.size();
  std::size_t n = data.rows.size();
  std::vector<std::vector<double>> z(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = standardize_row(model.linear, data.rows[i].values);
    y[i] = data.rows[i].label == Label::llm ? 1 : -1;
  }
  std::vector<double>& w = model.linear.weights;
  w.assign(d, 0.0);
  double& b = model.linear.bias;
  double lambda = spec.regularization;
  Rng rng(spec.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      double eta = 1.0 / (lambda * static_cast<double>(t));
      double margin = static_cast<double>(y[i]) *
                      (std::inner_product(z[i].begin(), z[i].end(), w.begin(), 0.0) + b);
      double keep = 1.0 - eta * lambda;
      if (keep < 0.0) keep = 0.0;
      if (margin < 1.0) {
        for (std::size_t f = 0; f < d; ++f) {
          w[f] = keep * w[f] + eta * static_cast<double>(y[i]) * z[i][f];
        }
        b += eta * static_cast<double>(y[i]);
      } else {
        for (std::size_t f = 0; f < d; ++f) w[f] = keep * w[f];
      }
    }
  }
  return model;
}

}  // namespace

const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::tree: return "tree";
    case ModelKind::forest: return "forest";
    case ModelKind::logistic: return "logistic";
    case ModelKind::svm: return "svm";
  }
  return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "tree") return ModelKind::tree;
  if (name == "forest") return ModelKind::forest;
  if (name == "logistic") return ModelKind::logistic;
  if (name == "svm") return ModelKind::svm;
  throw std::runtime_error("unknown model kind: " + name);
}

std::vector<std::size_t> bootstrap_indices(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = rng.uniform_index(n);
  return idx;
}

DecisionTree train_tree_on(const Dataset& data, const std::vector<std::size_t>& rows,
                           const ModelSpec& spec, Rng* feature_rng) {
  TreeBuilder builder{data, spec, feature_rng, data.feature_names.size(), {}};
  if (spec.features_per_split >= data.feature_names.size()) {
    builder.feature_rng = nullptr;  // full feature set never samples
  }
  builder.build(rows, 0);
  return std::move(builder.tree);
}

double tree_score(const DecisionTree& tree, const std::vector<double>& x) {
  std::size_t i = 0;
  for (;;) {
    const TreeNode& node = tree.nodes[i];
    if (node.feature < 0) {
      std::size_t total = node.count_human + node.count_llm;
      return total == 0 ? 0.5
                        : static_cast<double>(node.count_llm) /
                              static_cast<double>(total);
    }
    i = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                    : node.right;
  }
}

TrainedModel train(const ModelSpec& spec, const Dataset& data) {
  check_trainable(data);
  TrainedModel model;
  switch (spec.kind) {
    case ModelKind::tree: {
      model.kind = ModelKind::tree;
      std::vector<std::size_t> rows(data.rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      ModelSpec tree_spec = spec;
      tree_spec.features_per_split = 0;
      model.tree = train_tree_on(data, rows, tree_spec, nullptr);
      break;
    }
    case ModelKind::forest: {
      model.kind = ModelKind::forest;
      std::size_t d = data.feature_names.size();
      ModelSpec tree_spec = spec;
      if (tree_spec.features_per_split == 0) {
        tree_spec.features_per_split = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(d))));
      }
      model.forest.reserve(spec.n_trees);
      for (std::size_t t = 0; t < spec.n_trees; ++t) {
        std::uint64_t tree_seed = derive_seed(spec.seed, t);
        auto rows = bootstrap_indices(tree_seed, data.rows.size());
        Rng feature_rng(derive_seed(tree_seed, 1));
        model.forest.push_back(train_tree_on(data, rows, tree_spec, &feature_rng));
      }
      break;
    }
    case ModelKind::logistic:
      model = train_logistic(spec, data);
      break;
    case ModelKind::svm:
      model = train_svm(spec, data);
      break;
  }
  model.spec = spec;
  model.feature_names = data.feature_names;
  model.schema_fp = data.fingerprint();
  return model;
}

Prediction predict(const TrainedModel& model, const std::vector<double>& values,
                   std::uint64_t schema_fp) {
  if (schema_fp != model.schema_fp) throw SchemaMismatch();
  double score = 0.0;
  switch (model.kind) {
    case ModelKind::tree:
      score = tree_score(model.tree, values);
      break;
    case ModelKind::forest: {
      std::size_t votes = 0;
      for (const auto& tree : model.forest) {
        if (tree_score(tree, values) >= 0.5) ++votes;
      }
      score = static_cast<double>(votes) / static_cast<double>(model.forest.size());
      break;
    }
    case ModelKind::logistic:
    case ModelKind::svm: {
      auto z = standardize_row(model.linear, values);
      double margin = std::inner_product(z.begin(), z.end(),
                                         model.linear.weights.begin(),
                                         model.linear.bias);
      score = sigmoid(margin);
      break;
    }
  }
  Prediction p;
  p.score = score;
  p.label = score >= 0.5 ? Label::llm : Label::human;  // tie goes to llm
  return p;
}

Prediction predict_row(const TrainedModel& model, const Dataset& data, std::size_t row) {
  return predict(model, data.rows[row].values, data.fingerprint());
}

double logistic_loss(const std::vector<std::vector<double>>& x,
                     const std::vector<int>& y, const std::vector<double>& w,
                     double bias, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double m = std::inner_product(x[i].begin(), x[i].end(), w.begin(), bias);
    // numerically stable log(1 + exp(..)) forms
    double ce = m > 0 ? m - static_cast<double>(y[i]) * m + std::log1p(std::exp(-m))
                      : -static_cast<double>(y[i]) * m + std::log1p(std::exp(m));
    loss += ce;
  }
  loss /= static_cast<double>(x.size());
  double reg = 0.0;
  for (double v : w) reg += v * v;
  return loss + 0.5 * l2 * reg;
}

void logistic_gradient(const std::vector<std::vector<double>>& x,
                       const std::vector<int>& y, const std::vector<double>& w,
                       double bias, double l2, std::vector<double>& grad_w,
                       double& grad_b) {
  grad_w.assign(w.size(), 0.0);
  grad_b = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double m = std::inner_product(x[i].begin(), x[i].end(), w.begin(), bias);
    double g = sigmoid(m) - static_cast<double>(y[i]);
    for (std::size_t f = 0; f < w.size(); ++f) grad_w[f] += g * x[i][f];
    grad_b += g;
  }
  for (std::size_t f = 0; f < w.size(); ++f) {
    grad_w[f] = grad_w[f] / static_cast<double>(x.size()) + l2 * w[f];
  }
  grad_b /= static_cast<double>(x.size());
}

namespace {

void write_tree(std::ostream& out, const DecisionTree& tree) {
  out << "nodes " << tree.nodes.size() << "\n";
  for (const auto& n : tree.nodes) {
    out << n.feature << ' ' << format_double(n.threshold) << ' ' << n.left << ' '
        << n.right << ' ' << n.count_human << ' ' << n.count_llm << "\n";
  }
}

DecisionTree read_tree(std::istream& in) {
  std::string word;
  std::size_t count = 0;
  in >> word >> count;
  if (word != "nodes") throw std::runtime_error("bad model file: expected nodes");
  DecisionTree tree;
  tree.nodes.resize(count);
  for (auto& n : tree.nodes) {
    std::string thr;
    in >> n.feature >> thr >> n.left >> n.right >> n.count_human >> n.count_llm;
    n.threshold = parse_double(thr);
  }
  return tree;
}

void write_linear(std::ostream& out, const LinearModel& m) {
  out << "dims " << m.weights.size() << "\n";
  out << "bias " << format_double(m.bias) << "\n";
  auto dump = [&](const char* name, const std::vector<double>& v) {
    out << name;
    for (double x : v) out << ' ' << format_double(x);
    out << "\n";
  };
  dump("weights", m.weights);
  dump("mean", m.mean);
  dump("scale", m.scale);
}

LinearModel read_linear(std::istream& in) {
  LinearModel m;
  std::string word, val;
  std::size_t d = 0;
  in >> word >> d;
  if (word != "dims") throw std::runtime_error("bad model file: expected dims");
  in >> word >> val;
  m.bias = parse_double(val);
  auto slurp = [&](const char* name, std::vector<double>& v) {
    in >> word;
    if (word != name) throw std::runtime_error("bad model file: expected " + std::string(name));
    v.resize(d);
    for (auto& x : v) {
      in >> val;
      x = parse_double(val);
    }
  };
  slurp("weights", m.weights);
  slurp("mean", m.mean);
  slurp("scale", m.scale);
  return m;
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
  std::ostringstream out;
  out << "stylo-model v1\n";
  out << "kind " << model_kind_name(model.kind) << "\n";
  out << "schema " << to_hex(model.schema_fp) << "\n";
  out << "seed " << model.spec.seed << "\n";
  out << "hyper " << model.spec.max_depth << ' ' << model.spec.min_leaf << ' '
      << model.spec.n_trees << ' ' << model.spec.features_per_split << ' '
      << format_double(model.spec.l2) << ' ' << model.spec.epochs << ' '
      << format_double(model.spec.learning_rate) << ' '
      << format_double(model.spec.regularization) << "\n";
  out << "features " << model.feature_names.size() << "\n";
  for (const auto& name : model.feature_names) out << name << "\n";
  switch (model.kind) {
    case ModelKind::tree:
      write_tree(out, model.tree);
      break;
    case ModelKind::forest:
      out << "trees " << model.forest.size() << "\n";
      for (const auto& t : model.forest) write_tree(out, t);
      break;
    case ModelKind::logistic:
    case ModelKind::svm:
      write_linear(out, model.linear);
      break;
  }
  write_file(path, out.str());
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  std::string line, word;
  std::getline(in, line);
  if (line != "stylo-model v1") throw std::runtime_error("bad model header: " + path);
  TrainedModel model;
  std::string kind_name, hex;
  in >> word >> kind_name;
  model.kind = model_kind_from_name(kind_name);
  in >> word >> hex;
  model.schema_fp = std::stoull(hex, nullptr, 16);
  in >> word >> model.spec.seed;
  std::string l2s, lrs, regs;
  in >> word >> model.spec.max_depth >> model.spec.min_leaf >> model.spec.n_trees >>
      model.spec.features_per_split >> l2s >> model.spec.epochs >> lrs >> regs;
  model.spec.l2 = parse_double(l2s);
  model.spec.learning_rate = parse_double(lrs);
  model.spec.regularization = parse_double(regs);
  model.spec.kind = model.kind;
  std::size_t nf = 0;
  in >> word >> nf;
  std::getline(in, line);  // eat newline
  model.feature_names.resize(nf);
  for (auto& name : model.feature_names) std::getline(in, name);
  switch (model.kind) {
    case ModelKind::tree:
      model.tree = read_tree(in);
      break;
    case ModelKind::forest: {
      std::size_t count = 0;
      in >> word >> count;
      model.forest.reserve(count);
      for (std::size_t i = 0; i < count; ++i) model.forest.push_back(read_tree(in));
      break;
    }
    case ModelKind::logistic:
    case ModelKind::svm:
      model.linear = read_linear(in);
      break;
  }
  return model;
}

}  // namespace stylo
