#include "pondwatch/ml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "models_detail.hpp"

namespace pondwatch::ml {
namespace {

constexpr double kGainEps = 1e-12;

double entropy(const std::vector<std::int64_t>& counts, std::int64_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (std::int64_t c : counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / static_cast<double>(total);
            h -= p * std::log2(p);
        }
    }
    return h;
}

std::size_t best_class(const std::vector<std::int64_t>& counts,
                       const std::vector<std::string>& class_names) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (counts[i] > counts[best] ||
            (counts[i] == counts[best] && class_names[i] < class_names[best])) {
            best = i;
        }
    }
    return best;
}

// Acklam's rational approximation to the standard normal quantile.
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (p <= 0.0 || p >= 1.0) throw DomainError("quantile probability outside (0, 1)");
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

struct SplitChoice {
    bool valid = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    double gain_ratio = 0.0;
};

// Best threshold for one feature by information gain; lower thresholds win
// exact ties.
SplitChoice best_feature_split(const Dataset& dataset, const std::vector<std::size_t>& indices,
                               std::size_t feature, const std::vector<std::int64_t>& counts,
                               double parent_entropy, std::size_t min_leaf) {
    const std::size_t n = indices.size();
    std::vector<std::pair<double, std::size_t>> ordered;  // (value, label)
    ordered.reserve(n);
    for (std::size_t idx : indices) {
        ordered.emplace_back(dataset.instances[idx].features[feature],
                             dataset.instances[idx].label);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    SplitChoice choice;
    choice.feature = static_cast<int>(feature);

    std::vector<std::int64_t> left(counts.size(), 0);
    const double total = static_cast<double>(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        left[ordered[i].second]++;
        if (ordered[i].first == ordered[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;

        std::vector<std::int64_t> right(counts.size());
        for (std::size_t k = 0; k < counts.size(); ++k) right[k] = counts[k] - left[k];
        const double wl = static_cast<double>(nl) / total;
        const double wr = static_cast<double>(nr) / total;
        const double gain = parent_entropy - wl * entropy(left, static_cast<std::int64_t>(nl)) -
                            wr * entropy(right, static_cast<std::int64_t>(nr));
        if (gain <= kGainEps) continue;
        if (!choice.valid || gain > choice.gain + kGainEps) {
            choice.valid = true;
            choice.gain = gain;
            choice.threshold = (ordered[i].first + ordered[i + 1].first) / 2.0;
            const double split_info = -wl * std::log2(wl) - wr * std::log2(wr);
            choice.gain_ratio = gain / split_info;
        }
    }
    return choice;
}

struct Builder {
    const Dataset& dataset;
    const TreeBuildOptions& options;
    Tree tree;

    std::vector<std::size_t> candidate_features(Rng* rng) const {
        const std::size_t width = dataset.feature_count();
        std::vector<std::size_t> features(width);
        std::iota(features.begin(), features.end(), 0);
        if (options.features_per_split == 0 || options.features_per_split >= width) {
            return features;
        }
        // Partial Fisher-Yates, then ascending order so index tie-breaks
        // stay meaningful.
        for (std::size_t i = 0; i < options.features_per_split; ++i) {
            std::swap(features[i], features[i + rng->below(width - i)]);
        }
        features.resize(options.features_per_split);
        std::sort(features.begin(), features.end());
        return features;
    }

    int build(std::vector<std::size_t>& indices) {
        std::vector<std::int64_t> counts(dataset.class_names.size(), 0);
        for (std::size_t idx : indices) counts[dataset.instances[idx].label]++;

        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, counts});

        const std::int64_t populated =
            std::count_if(counts.begin(), counts.end(), [](std::int64_t c) { return c > 0; });
        if (populated <= 1 || indices.size() < 2 * options.min_leaf) return node_index;

        const double parent_entropy =
            entropy(counts, static_cast<std::int64_t>(indices.size()));

        std::vector<SplitChoice> candidates;
        for (std::size_t feature : candidate_features(options.rng)) {
            SplitChoice c = best_feature_split(dataset, indices, feature, counts,
                                               parent_entropy, options.min_leaf);
            if (c.valid) candidates.push_back(c);
        }
        if (candidates.empty()) return node_index;

        SplitChoice chosen;
        if (options.criterion == TreeBuildOptions::Criterion::InfoGain) {
            for (const SplitChoice& c : candidates) {
                if (!chosen.valid || c.gain > chosen.gain + kGainEps) chosen = c;
            }
        } else {
            double mean_gain = 0.0;
            for (const SplitChoice& c : candidates) mean_gain += c.gain;
            mean_gain /= static_cast<double>(candidates.size());
            for (const SplitChoice& c : candidates) {
                if (options.mean_gain_gate && c.gain + kGainEps < mean_gain) continue;
                if (!chosen.valid || c.gain_ratio > chosen.gain_ratio + kGainEps) chosen = c;
            }
            // The gate can only exclude splits when at least one reaches the
            // mean, so something is always chosen.
        }

        auto goes_left = [&](std::size_t idx) {
            return dataset.instances[idx].features[static_cast<std::size_t>(chosen.feature)] <=
                   chosen.threshold;
        };
        std::vector<std::size_t> left_idx, right_idx;
        left_idx.reserve(indices.size());
        for (std::size_t idx : indices) {
            (goes_left(idx) ? left_idx : right_idx).push_back(idx);
        }

        tree.nodes[static_cast<std::size_t>(node_index)].feature = chosen.feature;
        tree.nodes[static_cast<std::size_t>(node_index)].threshold = chosen.threshold;
        const int left = build(left_idx);
        tree.nodes[static_cast<std::size_t>(node_index)].left = left;
        const int right = build(right_idx);
        tree.nodes[static_cast<std::size_t>(node_index)].right = right;
        return node_index;
    }
};

// Drop nodes orphaned by pruning; keeps serialized trees minimal.
Tree compact(const Tree& tree) {
    Tree out;
    if (tree.empty()) return out;
    std::vector<int> stack = {0};
    std::vector<int> remap(tree.nodes.size(), -1);
    // Depth-first copy preserving child order.
    std::vector<int> order;
    while (!stack.empty()) {
        const int current = stack.back();
        stack.pop_back();
        order.push_back(current);
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(current)];
        if (node.feature >= 0) {
            stack.push_back(node.right);
            stack.push_back(node.left);
        }
    }
    for (int old_index : order) {
        remap[static_cast<std::size_t>(old_index)] = static_cast<int>(out.nodes.size());
        out.nodes.push_back(tree.nodes[static_cast<std::size_t>(old_index)]);
    }
    for (TreeNode& node : out.nodes) {
        if (node.feature >= 0) {
            node.left = remap[static_cast<std::size_t>(node.left)];
            node.right = remap[static_cast<std::size_t>(node.right)];
        }
    }
    return out;
}

double subtree_estimated_errors(const Tree& tree, int index, double confidence) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    if (node.feature < 0) {
        const std::int64_t n = std::accumulate(node.class_counts.begin(),
                                               node.class_counts.end(), std::int64_t{0});
        const std::int64_t errors =
            n - *std::max_element(node.class_counts.begin(), node.class_counts.end());
        return static_cast<double>(errors) +
               pessimistic_added_errors(static_cast<double>(n), static_cast<double>(errors),
                                        confidence);
    }
    return subtree_estimated_errors(tree, node.left, confidence) +
           subtree_estimated_errors(tree, node.right, confidence);
}

void prune_node_pessimistic(Tree& tree, int index, double confidence) {
    TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    if (node.feature < 0) return;
    prune_node_pessimistic(tree, node.left, confidence);
    prune_node_pessimistic(tree, node.right, confidence);

    const double subtree_errors = subtree_estimated_errors(tree, index, confidence);
    const std::int64_t n =
        std::accumulate(node.class_counts.begin(), node.class_counts.end(), std::int64_t{0});
    const std::int64_t errors =
        n - *std::max_element(node.class_counts.begin(), node.class_counts.end());
    const double leaf_errors =
        static_cast<double>(errors) +
        pessimistic_added_errors(static_cast<double>(n), static_cast<double>(errors), confidence);
    // C4.5 keeps the subtree only when it beats the leaf by more than 0.1
    // estimated errors.
    if (leaf_errors <= subtree_errors + 0.1) {
        node.feature = -1;
        node.left = node.right = -1;
    }
}

}  // namespace

const TreeNode& Tree::leaf_for(const std::vector<double>& features) const {
    if (nodes.empty()) throw DomainError("empty tree");
    std::size_t index = 0;
    for (;;) {
        const TreeNode& node = nodes[index];
        if (node.feature < 0) return node;
        const double v = features.at(static_cast<std::size_t>(node.feature));
        index = static_cast<std::size_t>(v <= node.threshold ? node.left : node.right);
    }
}

bool Tree::counts_consistent() const {
    for (const TreeNode& node : nodes) {
        if (node.feature < 0) continue;
        const auto& left = nodes[static_cast<std::size_t>(node.left)].class_counts;
        const auto& right = nodes[static_cast<std::size_t>(node.right)].class_counts;
        for (std::size_t k = 0; k < node.class_counts.size(); ++k) {
            if (node.class_counts[k] != left[k] + right[k]) return false;
        }
    }
    return true;
}

double pessimistic_added_errors(double n, double e, double confidence) {
    if (n <= 0.0) return 0.0;
    if (e < 1.0) {
        const double base = n * (1.0 - std::pow(confidence, 1.0 / n));
        if (e <= 0.0) return base;
        // Linear interpolation between the e=0 and e=1 estimates, as C4.5.
        return base + e * (pessimistic_added_errors(n, 1.0, confidence) - base);
    }
    if (e + 0.5 >= n) return std::max(n - e, 0.0);
    const double z = normal_quantile(1.0 - confidence);
    const double f = (e + 0.5) / n;
    const double r =
        (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
        (1.0 + z * z / n);
    return r * n - e;
}

Tree build_tree(const Dataset& dataset, const std::vector<std::size_t>& indices,
                const TreeBuildOptions& options) {
    if (indices.empty()) throw ValidationError("cannot grow a tree from zero instances");
    if (options.min_leaf < 1) throw ValidationError("min_leaf must be at least 1");
    if (options.features_per_split > 0 && options.rng == nullptr) {
        throw ValidationError("feature sampling requires an RNG");
    }
    Builder builder{dataset, options, {}};
    std::vector<std::size_t> root = indices;
    builder.build(root);
    return std::move(builder.tree);
}

void prune_pessimistic(Tree& tree, double confidence) {
    if (confidence <= 0.0 || confidence > 0.5) {
        throw ValidationError("pruning confidence outside (0, 0.5]");
    }
    if (tree.empty()) return;
    prune_node_pessimistic(tree, 0, confidence);
    tree = compact(tree);
}

void prune_reduced_error(Tree& tree, const Dataset& dataset,
                         const std::vector<std::size_t>& prune_indices,
                         const std::vector<std::string>& class_names) {
    if (tree.empty()) return;

    // Route the prune set down the tree once.
    std::vector<std::vector<std::size_t>> node_instances(tree.nodes.size());
    for (std::size_t idx : prune_indices) {
        std::size_t node = 0;
        for (;;) {
            node_instances[node].push_back(idx);
            const TreeNode& current = tree.nodes[node];
            if (current.feature < 0) break;
            const double v =
                dataset.instances[idx].features[static_cast<std::size_t>(current.feature)];
            node = static_cast<std::size_t>(v <= current.threshold ? current.left
                                                                   : current.right);
        }
    }

    auto leaf_errors = [&](int index) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
        const std::size_t majority = best_class(node.class_counts, class_names);
        std::int64_t errors = 0;
        for (std::size_t idx : node_instances[static_cast<std::size_t>(index)]) {
            if (dataset.instances[idx].label != majority) ++errors;
        }
        return errors;
    };

    // Bottom-up: replace a subtree whenever a leaf does no worse on the
    // prune set.
    auto prune = [&](auto&& self, int index) -> std::int64_t {
        TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
        if (node.feature < 0) return leaf_errors(index);
        const std::int64_t subtree = self(self, node.left) + self(self, node.right);
        const std::int64_t as_leaf = leaf_errors(index);
        if (as_leaf <= subtree) {
            node.feature = -1;
            node.left = node.right = -1;
            return as_leaf;
        }
        return subtree;
    };
    prune(prune, 0);
    tree = compact(tree);
}

using detail::TreeModel;

std::unique_ptr<Model> train_j48(const Dataset& dataset, const J48Params& params) {
    validate_training_data(dataset);
    if (params.min_leaf < 1) throw ValidationError("min_leaf must be at least 1");

    std::vector<std::size_t> indices(dataset.size());
    std::iota(indices.begin(), indices.end(), 0);
    TreeBuildOptions options;
    options.criterion = TreeBuildOptions::Criterion::GainRatio;
    options.min_leaf = params.min_leaf;
    Tree tree = build_tree(dataset, indices, options);
    if (!params.unpruned) prune_pessimistic(tree, params.confidence);
    return std::make_unique<TreeModel>(Algorithm::J48, dataset.class_names,
                                       dataset.feature_count(), std::move(tree));
}

std::unique_ptr<Model> train_reptree(const Dataset& dataset, const RepTreeParams& params,
                                     std::uint64_t seed) {
    validate_training_data(dataset);
    if (dataset.size() < 3) {
        throw ValidationError("reduced-error pruning needs at least 3 instances");
    }
    if (params.prune_fraction <= 0.0 || params.prune_fraction >= 1.0) {
        throw ValidationError("prune fraction outside (0, 1)");
    }

    std::vector<std::size_t> indices(dataset.size());
    std::iota(indices.begin(), indices.end(), 0);
    Rng rng(seed);
    rng.shuffle(indices);

    const double raw = static_cast<double>(dataset.size()) * params.prune_fraction;
    std::size_t prune_count = static_cast<std::size_t>(round_half_away(raw));
    prune_count = std::clamp<std::size_t>(prune_count, 1, dataset.size() - 1);

    std::vector<std::size_t> prune_set(indices.begin(),
                                       indices.begin() + static_cast<std::ptrdiff_t>(prune_count));
    std::vector<std::size_t> grow_set(indices.begin() + static_cast<std::ptrdiff_t>(prune_count),
                                      indices.end());

    TreeBuildOptions options;
    options.criterion = TreeBuildOptions::Criterion::InfoGain;
    options.min_leaf = params.min_leaf;
    options.mean_gain_gate = false;
    Tree tree = build_tree(dataset, grow_set, options);
    prune_reduced_error(tree, dataset, prune_set, dataset.class_names);
    return std::make_unique<TreeModel>(Algorithm::RepTree, dataset.class_names,
                                       dataset.feature_count(), std::move(tree));
}

}  // namespace pondwatch::ml

namespace pondwatch::ml::detail {

std::size_t TreeModel::predict(const std::vector<double>& features) const {
    const TreeNode& leaf = tree_.leaf_for(features);
    std::vector<double> votes(leaf.class_counts.begin(), leaf.class_counts.end());
    return argmax_class(votes);
}

json tree_to_json(const Tree& tree) {
    json nodes = json::array();
    for (const TreeNode& node : tree.nodes) {
        nodes.push_back({{"feature", node.feature},
                         {"threshold", node.threshold},
                         {"left", node.left},
                         {"right", node.right},
                         {"counts", node.class_counts}});
    }
    return nodes;
}

Tree tree_from_json(const json& doc) {
    Tree tree;
    for (const json& item : doc) {
        TreeNode node;
        node.feature = item.at("feature").get<int>();
        node.threshold = item.at("threshold").get<double>();
        node.left = item.at("left").get<int>();
        node.right = item.at("right").get<int>();
        node.class_counts = item.at("counts").get<std::vector<std::int64_t>>();
        tree.nodes.push_back(std::move(node));
    }
    return tree;
}

std::string TreeModel::serialize() const {
    json doc = model_header(*this);
    doc["tree"] = tree_to_json(tree_);
    return doc.dump();
}

std::unique_ptr<Model> TreeModel::from_json(const json& doc) {
    const std::string tag = doc.at("algorithm").get<std::string>();
    const Algorithm algorithm = tag == "reptree" ? Algorithm::RepTree : Algorithm::J48;
    check_header(doc, algorithm_tag(algorithm));
    return std::make_unique<TreeModel>(algorithm,
                                       doc.at("class_names").get<std::vector<std::string>>(),
                                       doc.at("feature_count").get<std::size_t>(),
                                       tree_from_json(doc.at("tree")));
}

}  // namespace pondwatch::ml::detail
