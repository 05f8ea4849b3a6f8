#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stylo/features.hpp"
#include "stylo/rng.hpp"

namespace stylo {

enum class ModelKind : std::uint8_t { tree, forest, logistic, svm };

const char* model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);

struct ModelSpec {
  ModelKind kind = ModelKind::tree;
  std::uint64_t seed = 1;
  // tree
  std::size_t max_depth = 0;  // 0 = unbounded
  std::size_t min_leaf = 1;
  // forest
  std::size_t n_trees = 100;
  std::size_t features_per_split = 0;  // 0 = ceil(sqrt(d))
  // logistic
  double l2 = 1e-4;
  std::size_t epochs = 150;
  double learning_rate = 0.1;
  // svm
  double regularization = 0.01;
};

struct DegenerateData : std::runtime_error {
  DegenerateData() : std::runtime_error("training data contains a single class") {}
};

struct SchemaMismatch : std::runtime_error {
  SchemaMismatch() : std::runtime_error("feature schema fingerprint mismatch") {}
};

// Index-based binary tree with threshold splits. feature == -1 marks a leaf.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t count_human = 0;
  std::size_t count_llm = 0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> mean;   // standardization, stored with the model
  std::vector<double> scale;  // 0 marks a constant feature (maps to z = 0)
};

struct TrainedModel {
  ModelKind kind = ModelKind::tree;
  ModelSpec spec;
  std::vector<std::string> feature_names;
  std::uint64_t schema_fp = 0;
  DecisionTree tree;
  std::vector<DecisionTree> forest;
  LinearModel linear;
};

struct Prediction {
  Label label = Label::human;
  double score = 0.0;  // P(llm); score >= 0.5 decides llm (ties go to llm)
};

TrainedModel train(const ModelSpec& spec, const Dataset& data);

Prediction predict(const TrainedModel& model, const std::vector<double>& values,
                   std::uint64_t schema_fp);
Prediction predict_row(const TrainedModel& model, const Dataset& data, std::size_t row);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

// Exposed pieces used by the equivalence and gradient-check tests.
std::vector<std::size_t> bootstrap_indices(std::uint64_t seed, std::size_t n);
DecisionTree train_tree_on(const Dataset& data, const std::vector<std::size_t>& rows,
                           const ModelSpec& spec, Rng* feature_rng);
double tree_score(const DecisionTree& tree, const std::vector<double>& x);

// Full-batch L2-regularized logistic loss and analytic gradient on
// standardized inputs; the gradient check compares this against central
// finite differences.
double logistic_loss(const std::vector<std::vector<double>>& x,
                     const std::vector<int>& y, const std::vector<double>& w,
                     double bias, double l2);
void logistic_gradient(const std::vector<std::vector<double>>& x,
                       const std::vector<int>& y, const std::vector<double>& w,
                       double bias, double l2, std::vector<double>& grad_w,
                       double& grad_b);

}  // namespace stylo
