#include "pondwatch/ml/folds.hpp"

#include <numeric>

#include "pondwatch/rng.hpp"

namespace pondwatch::ml {

FoldPlan stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
    validate_training_data(dataset);
    if (k < 2) throw ValidationError("cross-validation needs k >= 2");
    if (k > dataset.size()) throw ValidationError("more folds than instances");
    const std::vector<std::int64_t> counts = dataset.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            throw ValidationError("class '" + dataset.class_names[c] + "' has no instances");
        }
    }

    // Shuffle within each class, then deal round-robin with a cursor that
    // carries across classes: per-class fold counts and overall fold sizes
    // both stay within one of each other.
    Rng rng(seed);
    FoldPlan plan;
    plan.k = k;
    plan.assignment.assign(dataset.size(), 0);
    std::size_t cursor = 0;
    for (std::size_t c = 0; c < dataset.class_names.size(); ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (dataset.instances[i].label == c) members.push_back(i);
        }
        rng.shuffle(members);
        for (std::size_t idx : members) {
            plan.assignment[idx] = cursor % k;
            ++cursor;
        }
    }
    return plan;
}

ConfusionMatrix cross_validate(Algorithm algorithm, const Dataset& dataset, std::size_t k,
                               std::uint64_t seed, const TrainerConfig& config) {
    const FoldPlan plan = stratified_folds(dataset, k, seed);

    ConfusionMatrix cm(dataset.class_names);
    for (std::size_t fold = 0; fold < k; ++fold) {
        Dataset train;
        train.feature_names = dataset.feature_names;
        train.class_names = dataset.class_names;
        std::vector<std::size_t> held_out;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (plan.assignment[i] == fold) {
                held_out.push_back(i);
            } else {
                train.instances.push_back(dataset.instances[i]);
            }
        }
        if (held_out.empty()) continue;

        const std::unique_ptr<Model> model =
            train_model(algorithm, train, config, derive_seed(seed, 1000 + fold));
        for (std::size_t i : held_out) {
            const std::size_t predicted = model->predict(dataset.instances[i].features);
            cm.add(dataset.instances[i].label, predicted);
        }
    }
    return cm;
}

}  // namespace pondwatch::ml
