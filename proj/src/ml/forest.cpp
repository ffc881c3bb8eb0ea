#include <cmath>
#include <numeric>

#include "models_detail.hpp"

namespace pondwatch::ml {

using detail::ForestModel;

std::unique_ptr<Model> train_random_forest(const Dataset& dataset,
                                           const RandomForestParams& params,
                                           std::uint64_t seed) {
    validate_training_data(dataset);
    if (params.n_trees < 1) throw ValidationError("forest needs at least one tree");

    const std::size_t width = dataset.feature_count();
    std::size_t per_split = params.features_per_split;
    if (per_split == 0) {
        per_split = static_cast<std::size_t>(
            std::floor(std::log2(static_cast<double>(width)) + 1.0));
        per_split = std::max<std::size_t>(per_split, 1);
    }
    per_split = std::min(per_split, width);

    std::vector<Tree> trees;
    trees.reserve(params.n_trees);
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        // Each tree owns a derived RNG stream, so training order (or a
        // parallel schedule) cannot change the result.
        Rng rng(derive_seed(seed, t));

        std::vector<std::size_t> sample;
        sample.reserve(dataset.size());
        if (params.bootstrap) {
            for (std::size_t i = 0; i < dataset.size(); ++i) {
                sample.push_back(rng.below(dataset.size()));
            }
        } else {
            sample.resize(dataset.size());
            std::iota(sample.begin(), sample.end(), 0);
        }

        TreeBuildOptions options;
        options.criterion = TreeBuildOptions::Criterion::GainRatio;
        options.min_leaf = params.min_leaf;
        options.features_per_split = per_split < width ? per_split : 0;
        options.rng = &rng;
        trees.push_back(build_tree(dataset, sample, options));
    }
    return std::make_unique<ForestModel>(dataset.class_names, width, std::move(trees));
}

}  // namespace pondwatch::ml

namespace pondwatch::ml::detail {

std::vector<std::int64_t> ForestModel::vote_counts(const std::vector<double>& features) const {
    std::vector<std::int64_t> votes(class_names().size(), 0);
    for (const Tree& tree : trees_) {
        const TreeNode& leaf = tree.leaf_for(features);
        std::vector<double> counts(leaf.class_counts.begin(), leaf.class_counts.end());
        votes[argmax_class(counts)]++;
    }
    return votes;
}

std::size_t ForestModel::predict(const std::vector<double>& features) const {
    const std::vector<std::int64_t> votes = vote_counts(features);
    std::vector<double> scores(votes.begin(), votes.end());
    return argmax_class(scores);
}

std::string ForestModel::serialize() const {
    json doc = model_header(*this);
    json trees = json::array();
    for (const Tree& tree : trees_) trees.push_back(tree_to_json(tree));
    doc["trees"] = std::move(trees);
    return doc.dump();
}

std::unique_ptr<Model> ForestModel::from_json(const json& doc) {
    check_header(doc, "random_forest");
    std::vector<Tree> trees;
    for (const json& t : doc.at("trees")) trees.push_back(tree_from_json(t));
    return std::make_unique<ForestModel>(doc.at("class_names").get<std::vector<std::string>>(),
                                         doc.at("feature_count").get<std::size_t>(),
                                         std::move(trees));
}

}  // namespace pondwatch::ml::detail
