#ifndef PONDWATCH_ML_TREE_HPP
#define PONDWATCH_ML_TREE_HPP

#include <cstdint>
#include <vector>

#include "pondwatch/dataset.hpp"
#include "pondwatch/rng.hpp"

namespace pondwatch::ml {

// Binary threshold tree over numeric features, stored flat. Instances with
// feature <= threshold go left. Leaves keep the training class distribution.
struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<std::int64_t> class_counts;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    bool empty() const { return nodes.empty(); }
    const TreeNode& leaf_for(const std::vector<double>& features) const;
    // Internal-node consistency: children partition the parent's counts.
    bool counts_consistent() const;
};

struct TreeBuildOptions {
    enum class Criterion { GainRatio, InfoGain };
    Criterion criterion = Criterion::GainRatio;
    std::size_t min_leaf = 2;
    // C4.5 gate: a feature's split is eligible only when its information
    // gain reaches the mean gain over valid candidate splits.
    bool mean_gain_gate = true;
    std::size_t features_per_split = 0;  // 0 = consider all features
    Rng* rng = nullptr;                  // required when sampling features
};

Tree build_tree(const Dataset& dataset, const std::vector<std::size_t>& indices,
                const TreeBuildOptions& options);

// Confidence-bound pessimistic pruning (subtree replacement), in place.
void prune_pessimistic(Tree& tree, double confidence);

// Reduced-error pruning against a held-out set, in place.
void prune_reduced_error(Tree& tree, const Dataset& dataset,
                         const std::vector<std::size_t>& prune_indices,
                         const std::vector<std::string>& class_names);

// Upper confidence bound on the error count for n instances with e observed
// errors (the C4.5 pessimistic estimate).
double pessimistic_added_errors(double n, double e, double confidence);

}  // namespace pondwatch::ml

#endif
