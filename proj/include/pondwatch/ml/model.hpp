#ifndef PONDWATCH_ML_MODEL_HPP
#define PONDWATCH_ML_MODEL_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pondwatch/dataset.hpp"

namespace pondwatch::ml {

enum class Algorithm { Knn, J48, RandomForest, RepTree, DecisionTable, LogitBoost };

std::string_view algorithm_tag(Algorithm a);
// Accepts canonical tags plus the short alias "rf".
std::optional<Algorithm> parse_algorithm(std::string_view tag);
std::vector<Algorithm> all_algorithms();

// A trained classifier. Immutable after training; prediction is total over
// vectors of the training feature width.
class Model {
public:
    virtual ~Model() = default;

    virtual Algorithm algorithm() const = 0;
    const std::vector<std::string>& class_names() const { return class_names_; }
    std::size_t feature_count() const { return feature_count_; }

    virtual std::size_t predict(const std::vector<double>& features) const = 0;
    const std::string& predict_name(const std::vector<double>& features) const {
        return class_names_.at(predict(features));
    }

    // Self-describing JSON document; see model_io for the inverse.
    virtual std::string serialize() const = 0;

protected:
    Model(std::vector<std::string> class_names, std::size_t feature_count)
        : class_names_(std::move(class_names)), feature_count_(feature_count) {}

    // Largest score wins; exact ties go to the lexicographically smallest
    // class name, then the lowest index. Applied uniformly by every trainer.
    std::size_t argmax_class(const std::vector<double>& scores) const;

private:
    std::vector<std::string> class_names_;
    std::size_t feature_count_ = 0;
};

struct KnnParams {
    std::size_t k_neighbors = 1;
};

struct J48Params {
    std::size_t min_leaf = 2;
    double confidence = 0.25;
    bool unpruned = false;
};

struct RandomForestParams {
    std::size_t n_trees = 100;
    std::size_t features_per_split = 0;  // 0 -> floor(log2(F) + 1)
    std::size_t min_leaf = 2;
    bool bootstrap = true;
};

struct RepTreeParams {
    double prune_fraction = 1.0 / 3.0;
    std::size_t min_leaf = 2;
};

struct DecisionTableParams {
    std::size_t bins = 10;
    std::size_t stale_limit = 5;  // best-first expansions without improvement
};

struct LogitBoostParams {
    std::size_t iterations = 10;
};

std::unique_ptr<Model> train_knn(const Dataset& dataset, const KnnParams& params = {});
std::unique_ptr<Model> train_j48(const Dataset& dataset, const J48Params& params = {});
std::unique_ptr<Model> train_random_forest(const Dataset& dataset,
                                           const RandomForestParams& params, std::uint64_t seed);
std::unique_ptr<Model> train_reptree(const Dataset& dataset, const RepTreeParams& params,
                                     std::uint64_t seed);
std::unique_ptr<Model> train_decision_table(const Dataset& dataset,
                                            const DecisionTableParams& params = {});
std::unique_ptr<Model> train_logitboost(const Dataset& dataset,
                                        const LogitBoostParams& params = {});

struct TrainerConfig {
    KnnParams knn;
    J48Params j48;
    RandomForestParams forest;
    RepTreeParams reptree;
    DecisionTableParams table;
    LogitBoostParams boost;
};

// Dispatch on tag; `seed` feeds the seeded trainers (forest, reptree).
std::unique_ptr<Model> train_model(Algorithm algorithm, const Dataset& dataset,
                                   const TrainerConfig& config = {}, std::uint64_t seed = 0);

// Shared trainer precondition checks (non-empty, rectangular, labels valid).
void validate_training_data(const Dataset& dataset);

}  // namespace pondwatch::ml

#endif
