#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evidencer/errors.hpp"

namespace evidencer::models {

// Binary labels: 1 = transformative (positive class), 0 = incremental.

struct ClassWeights {
    double w0 = 1.0;
    double w1 = 1.0;

    double of(int label) const { return label ? w1 : w0; }
};

// w_c = n_total / (2 * n_c): both classes end up with equal weighted mass.
ClassWeights balanced_weights(const std::vector<int>& labels);

// Flat tree storage; node 0 is the root. A leaf has feature == -1 and carries
// `value` (class-1 probability for classification trees, additive score for
// boosted regression trees). Split nodes record the weighted impurity
// decrease for importance accounting.
struct TreeNode {
    int feature = -1;
    double threshold = 0;
    double value = 0;
    double decrease = 0;
    int left = -1;
    int right = -1;

    bool is_leaf() const { return feature < 0; }
};
using Tree = std::vector<TreeNode>;

// Row-sparse design matrix; the trainer builds its column view internally.
struct DataMatrix {
    int n_cols = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;  // (col, value), sorted by col
    std::vector<std::string> feature_names;                 // empty or size n_cols

    int n_rows() const { return static_cast<int>(rows.size()); }
    void add_row(const std::vector<std::pair<int, double>>& entries);
};

struct TreeParams {
    int max_depth = -1;          // -1: unlimited
    double min_leaf_weight = 0;  // stop below this node weight
    int max_features = 0;        // 0: all; otherwise non-constant features examined per node
    std::uint64_t seed = 0;
};

// Greedy CART with weighted Gini, midpoint thresholds between consecutive
// distinct values, ties broken toward the lowest feature index then lowest
// threshold. Splits are taken whenever the node is impure and a valid
// candidate exists, so zero-gain splits (XOR roots) still recurse.
Tree fit_tree(const DataMatrix& x, const std::vector<int>& y,
              const std::vector<double>& sample_weights, const TreeParams& params);

double predict_tree(const Tree& tree, const std::vector<double>& dense_row);

enum class EnsembleKind { RandomForest, AdaBoost, GradientBoosted };

EnsembleKind parse_kind(const std::string& name);
std::string kind_name(EnsembleKind kind);

struct EnsembleParams {
    int n_trees = 200;
    double learning_rate = 0.1;
    bool bootstrap = true;       // random forest only
    int max_depth = 0;           // 0: kind default (unlimited forest, 3 boosting)
    int max_features = 0;        // 0: kind default (sqrt(d) forest, all boosting)
    double min_leaf_weight = 0;
    ClassWeights class_weights;
    std::uint64_t seed = 0;
};

struct EnsembleModel {
    EnsembleKind kind = EnsembleKind::RandomForest;
    EnsembleParams params;
    std::vector<Tree> trees;
    std::vector<double> tree_weights;  // per-tree vote weight / shrinkage
    double base_score = 0;             // gradient-boosted prior log-odds
    int n_features = 0;
    std::vector<std::string> feature_names;
};

// Random forest: bootstrap + class-weighted samples, mean leaf probability.
// AdaBoost: SAMME reweighting over shallow trees, class-weighted start.
// Gradient boosting: logistic loss, trees fit to residuals, shrinkage.
// Reproducible from the seed.
EnsembleModel fit_ensemble(EnsembleKind kind, const DataMatrix& x, const std::vector<int>& y,
                           const EnsembleParams& params);

std::vector<double> predict_proba(const EnsembleModel& model, const DataMatrix& x);

struct FeatureImportance {
    std::string name;
    double mean = 0;
    double std_dev = 0;
};

// Per tree, summed split decreases per feature normalized to one inside the
// tree; mean and standard deviation across trees, sorted descending by mean.
std::vector<FeatureImportance> feature_importances(const EnsembleModel& model);

void save_model(const EnsembleModel& model, const std::string& path);
EnsembleModel load_model(const std::string& path);

// Guards a loaded model against a differently-shaped matrix.
void check_feature_names(const EnsembleModel& model, const std::vector<std::string>& names);

}  // namespace evidencer::models
