#include "evidencer/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "evidencer/rng.hpp"

namespace evidencer::models {

namespace {

constexpr double kEps = 1e-12;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Column view shared by every tree of an ensemble.
struct ColumnView {
    std::vector<std::vector<std::pair<int, double>>> columns;  // (row, value) by row order

    ColumnView(const DataMatrix& x) : columns(x.n_cols) {
        for (int r = 0; r < x.n_rows(); ++r)
            for (const auto& [c, v] : x.rows[r]) columns[c].emplace_back(r, v);
    }
};

// Either Gini (binary classification on y/weights) or squared error
// (regression on targets); both expose sums the split scan needs.
struct GrowContext {
    const ColumnView& cols;
    int n_cols;
    const std::vector<double>& weights;
    const std::vector<int>& y;            // classification
    const std::vector<double>* targets;   // regression when non-null
    TreeParams params;
    Rng rng;
    std::vector<int> samples;       // partitioned in place; nodes own ranges
    std::vector<int> position;      // row -> index in samples
    std::vector<int> feature_pool;  // persistent pool for partial shuffles
    std::vector<double> scratch_value;  // per-row feature value cache for partitioning
    std::vector<int> scratch_stamp;
    int stamp = 0;
    Tree tree;

    GrowContext(const ColumnView& c, int ncols, const std::vector<double>& w,
                const std::vector<int>& labels, const std::vector<double>* t,
                const TreeParams& p)
        : cols(c), n_cols(ncols), weights(w), y(labels), targets(t), params(p), rng(p.seed) {
        position.assign(w.size(), -1);
        for (int r = 0; r < static_cast<int>(w.size()); ++r) {
            if (w[r] > 0) {
                position[r] = static_cast<int>(samples.size());
                samples.push_back(r);
            }
        }
        feature_pool.resize(n_cols);
        for (int j = 0; j < n_cols; ++j) feature_pool[j] = j;
        scratch_value.assign(w.size(), 0.0);
        scratch_stamp.assign(w.size(), 0);
    }

    bool in_range(int row, int lo, int hi) const {
        int p = position[row];
        return p >= lo && p < hi;
    }
};

struct NodeStats {
    double w = 0;    // total weight
    double wy = 0;   // classification: weighted positives; regression: sum w*t
    double wyy = 0;  // regression: sum w*t^2
};

NodeStats stats_of(const GrowContext& ctx, int lo, int hi) {
    NodeStats s;
    for (int i = lo; i < hi; ++i) {
        int r = ctx.samples[i];
        double w = ctx.weights[r];
        s.w += w;
        if (ctx.targets) {
            double t = (*ctx.targets)[r];
            s.wy += w * t;
            s.wyy += w * t * t;
        } else {
            s.wy += w * ctx.y[r];
        }
    }
    return s;
}

// Impurity scaled by weight: W * Gini = 2*wy*(w-wy)/w, or the weighted SSE.
double weighted_impurity(const GrowContext& ctx, const NodeStats& s) {
    if (s.w <= 0) return 0;
    if (ctx.targets) return std::max(0.0, s.wyy - s.wy * s.wy / s.w);
    double p = s.wy / s.w;
    return 2.0 * p * (1.0 - p) * s.w;
}

struct SplitCandidate {
    bool found = false;
    int feature = -1;
    double threshold = 0;
    double decrease = 0;
};

struct ValuePoint {
    double value;
    double w;
    double wy;
    double wyy;
};

// Scans one feature within the node, updating the best candidate. Returns
// false when the feature is constant inside the node.
bool scan_feature(GrowContext& ctx, int feature, int lo, int hi, const NodeStats& node,
                  double node_impurity, SplitCandidate& best) {
    std::vector<ValuePoint> points;
    NodeStats nonzero;
    int nnz = 0;
    for (const auto& [row, value] : ctx.cols.columns[feature]) {
        if (!ctx.in_range(row, lo, hi)) continue;
        double w = ctx.weights[row];
        double t = ctx.targets ? (*ctx.targets)[row] : static_cast<double>(ctx.y[row]);
        points.push_back({value, w, w * t, w * t * t});
        nonzero.w += w;
        nonzero.wy += w * t;
        nonzero.wyy += w * t * t;
        ++nnz;
    }
    const int zeros = (hi - lo) - nnz;
    if (zeros > 0)
        points.push_back({0.0, node.w - nonzero.w, node.wy - nonzero.wy, node.wyy - nonzero.wyy});
    if (points.empty()) return false;

    std::sort(points.begin(), points.end(),
              [](const ValuePoint& a, const ValuePoint& b) { return a.value < b.value; });

    // Collapse equal values.
    std::size_t out = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].value == points[out].value) {
            points[out].w += points[i].w;
            points[out].wy += points[i].wy;
            points[out].wyy += points[i].wyy;
        } else {
            points[++out] = points[i];
        }
    }
    points.resize(out + 1);
    if (points.size() < 2) return false;

    NodeStats left;
    for (std::size_t g = 0; g + 1 < points.size(); ++g) {
        left.w += points[g].w;
        left.wy += points[g].wy;
        left.wyy += points[g].wyy;
        NodeStats right{node.w - left.w, node.wy - left.wy, node.wyy - left.wyy};
        if (left.w <= 0 || right.w <= 0) continue;

        double decrease =
            node_impurity - weighted_impurity(ctx, left) - weighted_impurity(ctx, right);
        double a = points[g].value, b = points[g + 1].value;
        double mid = a + (b - a) / 2.0;
        if (!(mid > a) || !(mid < b)) mid = a;  // adjacent doubles: fall back to the left value

        // Ties (within kEps) go to the lowest feature index, then the lowest
        // threshold, independent of evaluation order.
        bool take = false;
        if (!best.found || decrease > best.decrease + kEps) {
            take = true;
        } else if (decrease > best.decrease - kEps) {
            take = feature < best.feature ||
                   (feature == best.feature && mid < best.threshold);
        }
        if (take) {
            best.found = true;
            best.feature = feature;
            best.threshold = mid;
            best.decrease = std::max(0.0, decrease);
        }
    }
    return true;
}

int grow(GrowContext& ctx, int lo, int hi, int depth) {
    NodeStats node = stats_of(ctx, lo, hi);
    const double node_impurity = weighted_impurity(ctx, node);

    auto make_leaf = [&]() {
        TreeNode leaf;
        leaf.feature = -1;
        if (ctx.targets) {
            leaf.value = node.w > 0 ? node.wy / node.w : 0.0;
        } else {
            leaf.value = node.w > 0 ? node.wy / node.w : 0.5;
        }
        ctx.tree.push_back(leaf);
        return static_cast<int>(ctx.tree.size()) - 1;
    };

    const bool pure = node_impurity <= kEps;
    if (pure || (hi - lo) < 2 || node.w < ctx.params.min_leaf_weight ||
        (ctx.params.max_depth >= 0 && depth >= ctx.params.max_depth))
        return make_leaf();

    // Candidate features. With a max_features budget, draw seeded without
    // replacement; features that turn out constant inside the node do not use
    // up the budget, so impure nodes keep splitting while candidates exist.
    SplitCandidate best;
    const int budget = (ctx.params.max_features > 0 && ctx.params.max_features < ctx.n_cols)
                           ? ctx.params.max_features
                           : ctx.n_cols;
    if (budget >= ctx.n_cols) {
        for (int j = 0; j < ctx.n_cols; ++j) scan_feature(ctx, j, lo, hi, node, node_impurity, best);
    } else {
        int informative = 0;
        for (int drawn = 0; drawn < ctx.n_cols && informative < budget; ++drawn) {
            int pick = drawn + static_cast<int>(ctx.rng.uniform_int(
                                   static_cast<std::uint64_t>(ctx.n_cols - drawn)));
            std::swap(ctx.feature_pool[drawn], ctx.feature_pool[pick]);
            if (scan_feature(ctx, ctx.feature_pool[drawn], lo, hi, node, node_impurity, best))
                ++informative;
        }
    }

    if (!best.found) return make_leaf();

    // Partition samples[lo, hi) on x[feature] <= threshold.
    ++ctx.stamp;
    for (const auto& [row, value] : ctx.cols.columns[best.feature]) {
        if (!ctx.in_range(row, lo, hi)) continue;
        ctx.scratch_value[row] = value;
        ctx.scratch_stamp[row] = ctx.stamp;
    }
    auto value_of = [&](int row) {
        return ctx.scratch_stamp[row] == ctx.stamp ? ctx.scratch_value[row] : 0.0;
    };

    int mid = lo;
    for (int i = lo; i < hi; ++i) {
        int row = ctx.samples[i];
        if (value_of(row) <= best.threshold) {
            std::swap(ctx.samples[i], ctx.samples[mid]);
            ctx.position[ctx.samples[i]] = i;
            ctx.position[ctx.samples[mid]] = mid;
            ++mid;
        }
    }

    TreeNode split;
    split.feature = best.feature;
    split.threshold = best.threshold;
    split.decrease = best.decrease;
    split.value = node.wy / node.w;
    ctx.tree.push_back(split);
    int index = static_cast<int>(ctx.tree.size()) - 1;
    int left = grow(ctx, lo, mid, depth + 1);
    int right = grow(ctx, mid, hi, depth + 1);
    ctx.tree[index].left = left;
    ctx.tree[index].right = right;
    return index;
}

Tree grow_tree(const ColumnView& cols, int n_cols, const std::vector<int>& y,
               const std::vector<double>* targets, const std::vector<double>& weights,
               const TreeParams& params) {
    GrowContext ctx(cols, n_cols, weights, y, targets, params);
    if (ctx.samples.empty()) {
        Tree t;
        t.push_back(TreeNode{});
        t[0].value = targets ? 0.0 : 0.5;
        return t;
    }
    // The first grow() call pushes the root, so it always lands at index 0.
    grow(ctx, 0, static_cast<int>(ctx.samples.size()), 0);
    return std::move(ctx.tree);
}

}  // namespace

ClassWeights balanced_weights(const std::vector<int>& labels) {
    double n0 = 0, n1 = 0;
    for (int l : labels) (l ? n1 : n0) += 1;
    if (n0 == 0 || n1 == 0)
        throw Error(ErrorKind::SingleClass, "balanced_weights needs both classes present");
    const double total = n0 + n1;
    return {total / (2.0 * n0), total / (2.0 * n1)};
}

void DataMatrix::add_row(const std::vector<std::pair<int, double>>& entries) {
    rows.push_back(entries);
    std::sort(rows.back().begin(), rows.back().end());
    if (!rows.back().empty()) n_cols = std::max(n_cols, rows.back().back().first + 1);
}

Tree fit_tree(const DataMatrix& x, const std::vector<int>& y,
              const std::vector<double>& sample_weights, const TreeParams& params) {
    if (x.n_rows() != static_cast<int>(y.size()) ||
        x.n_rows() != static_cast<int>(sample_weights.size()))
        throw Error(ErrorKind::ShapeMismatch, "rows, labels and weights must align");
    if (x.n_cols < 1) throw Error(ErrorKind::ShapeMismatch, "need at least one feature");
    ColumnView cols(x);
    return grow_tree(cols, x.n_cols, y, nullptr, sample_weights, params);
}

double predict_tree(const Tree& tree, const std::vector<double>& dense_row) {
    int node = 0;
    while (!tree[node].is_leaf())
        node = dense_row[tree[node].feature] <= tree[node].threshold ? tree[node].left
                                                                     : tree[node].right;
    return tree[node].value;
}

EnsembleKind parse_kind(const std::string& name) {
    std::string k;
    for (char c : name) k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (k == "rf" || k == "random_forest" || k == "randomforest" || k == "forest")
        return EnsembleKind::RandomForest;
    if (k == "ada" || k == "adaboost") return EnsembleKind::AdaBoost;
    if (k == "gbt" || k == "gradient_boosted" || k == "gradientboosted" || k == "gbm")
        return EnsembleKind::GradientBoosted;
    throw Error(ErrorKind::Validation, "unknown classifier kind: '" + name + "'");
}

std::string kind_name(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::RandomForest: return "random_forest";
        case EnsembleKind::AdaBoost: return "adaboost";
        case EnsembleKind::GradientBoosted: return "gradient_boosted";
    }
    return "random_forest";
}

namespace {

int default_depth(EnsembleKind kind, int requested) {
    if (requested != 0) return requested;
    return kind == EnsembleKind::RandomForest ? -1 : 3;
}

int default_max_features(EnsembleKind kind, int requested, int n_cols) {
    if (requested != 0) return requested;
    if (kind == EnsembleKind::RandomForest)
        return std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n_cols))));
    return n_cols;
}

std::vector<double> dense_row_of(const DataMatrix& x, int r, std::vector<double>& buffer) {
    std::fill(buffer.begin(), buffer.end(), 0.0);
    for (const auto& [c, v] : x.rows[r]) buffer[c] = v;
    return buffer;
}

}  // namespace

EnsembleModel fit_ensemble(EnsembleKind kind, const DataMatrix& x, const std::vector<int>& y,
                           const EnsembleParams& params) {
    const int n = x.n_rows();
    if (n != static_cast<int>(y.size()))
        throw Error(ErrorKind::ShapeMismatch, "rows and labels must align");
    if (x.n_cols < 1) throw Error(ErrorKind::ShapeMismatch, "need at least one feature");
    if (params.n_trees < 1) throw Error(ErrorKind::Validation, "n_trees must be >= 1");
    bool has0 = false, has1 = false;
    for (int l : y) (l ? has1 : has0) = true;
    if (!has0 || !has1) throw Error(ErrorKind::SingleClass, "training labels cover one class only");

    EnsembleModel model;
    model.kind = kind;
    model.params = params;
    model.n_features = x.n_cols;
    model.feature_names = x.feature_names;

    ColumnView cols(x);
    const int depth = default_depth(kind, params.max_depth);
    const int max_features = default_max_features(kind, params.max_features, x.n_cols);

    std::vector<double> base_weights(n);
    for (int i = 0; i < n; ++i) base_weights[i] = params.class_weights.of(y[i]);

    if (kind == EnsembleKind::RandomForest) {
        for (int t = 0; t < params.n_trees; ++t) {
            TreeParams tp{depth, params.min_leaf_weight, max_features,
                          Rng::mix(params.seed, static_cast<std::uint64_t>(t))};
            std::vector<double> w(n, 0.0);
            if (params.bootstrap) {
                Rng boot(Rng::mix(params.seed, 0x8000000000000000ULL ^ static_cast<std::uint64_t>(t)));
                for (int i = 0; i < n; ++i)
                    w[boot.uniform_int(static_cast<std::uint64_t>(n))] += 1.0;
                for (int i = 0; i < n; ++i) w[i] *= base_weights[i];
            } else {
                w = base_weights;
            }
            model.trees.push_back(grow_tree(cols, x.n_cols, y, nullptr, w, tp));
            model.tree_weights.push_back(1.0);
        }
        return model;
    }

    if (kind == EnsembleKind::AdaBoost) {
        std::vector<double> w = base_weights;
        double sum = 0;
        for (double v : w) sum += v;
        for (double& v : w) v /= sum;

        for (int t = 0; t < params.n_trees; ++t) {
            TreeParams tp{depth, params.min_leaf_weight, max_features,
                          Rng::mix(params.seed, static_cast<std::uint64_t>(t))};
            Tree tree = grow_tree(cols, x.n_cols, y, nullptr, w, tp);

            std::vector<double> buffer(x.n_cols, 0.0);
            double err = 0;
            std::vector<int> pred(n);
            for (int i = 0; i < n; ++i) {
                pred[i] = predict_tree(tree, dense_row_of(x, i, buffer)) >= 0.5 ? 1 : 0;
                if (pred[i] != y[i]) err += w[i];
            }

            if (err <= kEps) {
                // Perfect stump: keep it with a capped vote and stop.
                model.trees.push_back(std::move(tree));
                model.tree_weights.push_back(std::log((1.0 - kEps) / kEps));
                break;
            }
            if (err >= 0.5) {
                if (model.trees.empty()) {
                    model.trees.push_back(std::move(tree));
                    model.tree_weights.push_back(kEps);
                }
                break;
            }
            double alpha = params.learning_rate * std::log((1.0 - err) / err);
            model.trees.push_back(std::move(tree));
            model.tree_weights.push_back(alpha);

            double norm = 0;
            for (int i = 0; i < n; ++i) {
                if (pred[i] != y[i]) w[i] *= std::exp(alpha);
                norm += w[i];
            }
            for (double& v : w) v /= norm;
        }
        return model;
    }

    // Gradient boosting with logistic loss. Trees are regression trees on the
    // residual y - p; leaves hold the Newton step sum(w*r)/sum(w*p*(1-p)).
    double wsum = 0, wpos = 0;
    for (int i = 0; i < n; ++i) {
        wsum += base_weights[i];
        wpos += base_weights[i] * y[i];
    }
    double prior = std::clamp(wpos / wsum, 1e-6, 1.0 - 1e-6);
    model.base_score = std::log(prior / (1.0 - prior));

    std::vector<double> f(n, model.base_score);
    std::vector<double> residual(n), hess(n);
    for (int t = 0; t < params.n_trees; ++t) {
        for (int i = 0; i < n; ++i) {
            double p = sigmoid(f[i]);
            residual[i] = y[i] - p;
            hess[i] = std::max(p * (1.0 - p), 1e-9);
        }
        TreeParams tp{depth, params.min_leaf_weight, max_features,
                      Rng::mix(params.seed, static_cast<std::uint64_t>(t))};
        Tree tree = grow_tree(cols, x.n_cols, y, &residual, base_weights, tp);

        // Replace leaf means with Newton estimates per leaf region.
        std::vector<double> num(tree.size(), 0.0), den(tree.size(), 0.0);
        std::vector<double> buffer(x.n_cols, 0.0);
        std::vector<int> leaf_of(n);
        for (int i = 0; i < n; ++i) {
            dense_row_of(x, i, buffer);
            int node = 0;
            while (!tree[node].is_leaf())
                node = buffer[tree[node].feature] <= tree[node].threshold ? tree[node].left
                                                                          : tree[node].right;
            leaf_of[i] = node;
            num[node] += base_weights[i] * residual[i];
            den[node] += base_weights[i] * hess[i];
        }
        for (std::size_t k = 0; k < tree.size(); ++k) {
            if (!tree[k].is_leaf()) continue;
            tree[k].value = den[k] > 0 ? num[k] / den[k] : 0.0;
        }
        for (int i = 0; i < n; ++i) f[i] += params.learning_rate * tree[leaf_of[i]].value;

        model.trees.push_back(std::move(tree));
        model.tree_weights.push_back(params.learning_rate);
    }
    return model;
}

std::vector<double> predict_proba(const EnsembleModel& model, const DataMatrix& x) {
    if (model.trees.empty()) throw Error(ErrorKind::UntrainedModel, "model has no trees");
    if (x.n_cols > model.n_features)
        throw Error(ErrorKind::ShapeMismatch,
                    "matrix has " + std::to_string(x.n_cols) + " features, model expects " +
                        std::to_string(model.n_features));
    if (!model.feature_names.empty() && !x.feature_names.empty())
        check_feature_names(model, x.feature_names);

    std::vector<double> out(x.n_rows(), 0.0);
    std::vector<double> buffer(model.n_features, 0.0);
    for (int i = 0; i < x.n_rows(); ++i) {
        std::fill(buffer.begin(), buffer.end(), 0.0);
        for (const auto& [c, v] : x.rows[i]) buffer[c] = v;

        double score = 0;
        switch (model.kind) {
            case EnsembleKind::RandomForest: {
                for (const auto& tree : model.trees) score += predict_tree(tree, buffer);
                score /= static_cast<double>(model.trees.size());
                break;
            }
            case EnsembleKind::AdaBoost: {
                double vote = 0, total = 0;
                for (std::size_t t = 0; t < model.trees.size(); ++t) {
                    double a = model.tree_weights[t];
                    total += a;
                    if (predict_tree(model.trees[t], buffer) >= 0.5) vote += a;
                }
                score = total > 0 ? vote / total : 0.5;
                break;
            }
            case EnsembleKind::GradientBoosted: {
                double z = model.base_score;
                for (std::size_t t = 0; t < model.trees.size(); ++t)
                    z += model.tree_weights[t] * predict_tree(model.trees[t], buffer);
                score = sigmoid(z);
                break;
            }
        }
        out[i] = score;
    }
    return out;
}

std::vector<FeatureImportance> feature_importances(const EnsembleModel& model) {
    const int d = model.n_features;
    std::vector<double> mean(d, 0.0), m2(d, 0.0);
    int used_trees = 0;

    std::vector<double> per_tree(d);
    for (const auto& tree : model.trees) {
        std::fill(per_tree.begin(), per_tree.end(), 0.0);
        double total = 0;
        for (const auto& node : tree) {
            if (node.is_leaf()) continue;
            per_tree[node.feature] += node.decrease;
            total += node.decrease;
        }
        if (total <= 0) continue;
        ++used_trees;
        for (int j = 0; j < d; ++j) {
            double v = per_tree[j] / total;
            double delta = v - mean[j];
            mean[j] += delta / used_trees;
            m2[j] += delta * (v - mean[j]);
        }
    }

    std::vector<FeatureImportance> out(d);
    for (int j = 0; j < d; ++j) {
        out[j].name = model.feature_names.empty() ? "f" + std::to_string(j)
                                                  : model.feature_names[j];
        out[j].mean = used_trees > 0 ? mean[j] : 0.0;
        out[j].std_dev = used_trees > 0 ? std::sqrt(m2[j] / used_trees) : 0.0;
    }
    std::sort(out.begin(), out.end(), [](const FeatureImportance& a, const FeatureImportance& b) {
        if (a.mean != b.mean) return a.mean > b.mean;
        return a.name < b.name;
    });
    return out;
}

namespace {

void write_double(std::ofstream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

}  // namespace

void save_model(const EnsembleModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    out << "evidencer-model v1\n";
    out << "kind " << kind_name(model.kind) << "\n";
    out << "params n_trees=" << model.params.n_trees << " learning_rate=";
    write_double(out, model.params.learning_rate);
    out << " bootstrap=" << (model.params.bootstrap ? 1 : 0)
        << " max_depth=" << model.params.max_depth
        << " max_features=" << model.params.max_features << " min_leaf_weight=";
    write_double(out, model.params.min_leaf_weight);
    out << " w0=";
    write_double(out, model.params.class_weights.w0);
    out << " w1=";
    write_double(out, model.params.class_weights.w1);
    out << "\nseed " << model.params.seed << "\n";
    out << "base_score ";
    write_double(out, model.base_score);
    out << "\nn_features " << model.n_features << "\n";
    out << "feature_names " << model.feature_names.size() << "\n";
    for (const auto& name : model.feature_names) out << name << "\n";
    out << "trees " << model.trees.size() << "\n";
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
        out << "tree " << t << " weight ";
        write_double(out, model.tree_weights[t]);
        out << " nodes " << model.trees[t].size() << "\n";
        for (const auto& node : model.trees[t]) {
            out << node.feature << ' ';
            write_double(out, node.threshold);
            out << ' ';
            write_double(out, node.value);
            out << ' ';
            write_double(out, node.decrease);
            out << ' ' << node.left << ' ' << node.right << "\n";
        }
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed: " + path);
}

EnsembleModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    auto fail = [&](const std::string& why) {
        return Error(ErrorKind::SchemaError, "model file " + path + ": " + why);
    };

    std::string line, word;
    if (!std::getline(in, line) || line != "evidencer-model v1") throw fail("bad header");

    EnsembleModel model;
    std::string kind;
    if (!(in >> word >> kind) || word != "kind") throw fail("bad kind");
    model.kind = parse_kind(kind);

    if (!(in >> word) || word != "params") throw fail("bad params");
    std::getline(in, line);
    {
        std::istringstream iss(line);
        std::string kv;
        while (iss >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw fail("bad param: " + kv);
            std::string key = kv.substr(0, eq);
            std::string val = kv.substr(eq + 1);
            if (key == "n_trees") model.params.n_trees = std::stoi(val);
            else if (key == "learning_rate") model.params.learning_rate = std::stod(val);
            else if (key == "bootstrap") model.params.bootstrap = val != "0";
            else if (key == "max_depth") model.params.max_depth = std::stoi(val);
            else if (key == "max_features") model.params.max_features = std::stoi(val);
            else if (key == "min_leaf_weight") model.params.min_leaf_weight = std::stod(val);
            else if (key == "w0") model.params.class_weights.w0 = std::stod(val);
            else if (key == "w1") model.params.class_weights.w1 = std::stod(val);
            else throw fail("unknown param: " + key);
        }
    }
    if (!(in >> word >> model.params.seed) || word != "seed") throw fail("bad seed");
    if (!(in >> word) || word != "base_score") throw fail("bad base_score");
    if (!(in >> model.base_score)) throw fail("bad base_score value");
    if (!(in >> word >> model.n_features) || word != "n_features") throw fail("bad n_features");

    std::size_t n_names = 0;
    if (!(in >> word >> n_names) || word != "feature_names") throw fail("bad feature_names");
    std::getline(in, line);
    for (std::size_t i = 0; i < n_names; ++i) {
        if (!std::getline(in, line)) throw fail("truncated feature names");
        model.feature_names.push_back(line);
    }

    std::size_t n_trees = 0;
    if (!(in >> word >> n_trees) || word != "trees") throw fail("bad trees");
    for (std::size_t t = 0; t < n_trees; ++t) {
        std::size_t index = 0, n_nodes = 0;
        double weight = 0;
        std::string w1, w2, w3;
        if (!(in >> w1 >> index >> w2 >> weight >> w3 >> n_nodes) || w1 != "tree" ||
            w2 != "weight" || w3 != "nodes")
            throw fail("bad tree header");
        Tree tree(n_nodes);
        for (std::size_t k = 0; k < n_nodes; ++k) {
            TreeNode& node = tree[k];
            if (!(in >> node.feature >> node.threshold >> node.value >> node.decrease >>
                  node.left >> node.right))
                throw fail("truncated tree nodes");
        }
        model.trees.push_back(std::move(tree));
        model.tree_weights.push_back(weight);
    }
    if (model.trees.empty()) throw fail("model has no trees");
    return model;
}

void check_feature_names(const EnsembleModel& model, const std::vector<std::string>& names) {
    if (model.feature_names.empty()) return;
    if (model.feature_names != names)
        throw Error(ErrorKind::ShapeMismatch,
                    "feature names do not match the model (" +
                        std::to_string(model.feature_names.size()) + " vs " +
                        std::to_string(names.size()) + ")");
}

}  // namespace evidencer::models
