#include "pondwatch/ml/model.hpp"

#include "models_detail.hpp"

namespace pondwatch::ml {

std::string_view algorithm_tag(Algorithm a) {
    switch (a) {
        case Algorithm::Knn: return "knn";
        case Algorithm::J48: return "j48";
        case Algorithm::RandomForest: return "random_forest";
        case Algorithm::RepTree: return "reptree";
        case Algorithm::DecisionTable: return "decision_table";
        case Algorithm::LogitBoost: return "logitboost";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view tag) {
    if (tag == "rf") return Algorithm::RandomForest;
    for (Algorithm a : all_algorithms()) {
        if (algorithm_tag(a) == tag) return a;
    }
    return std::nullopt;
}

std::vector<Algorithm> all_algorithms() {
    return {Algorithm::Knn,     Algorithm::J48,           Algorithm::RandomForest,
            Algorithm::RepTree, Algorithm::DecisionTable, Algorithm::LogitBoost};
}

std::size_t Model::argmax_class(const std::vector<double>& scores) const {
    if (scores.size() != class_names_.size()) {
        throw DomainError("score vector size does not match class count");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best] ||
            (scores[i] == scores[best] && class_names_[i] < class_names_[best])) {
            best = i;
        }
    }
    return best;
}

void validate_training_data(const Dataset& dataset) {
    if (dataset.instances.empty()) throw ValidationError("training data is empty");
    if (dataset.class_names.empty()) throw ValidationError("dataset declares no classes");
    const std::size_t width = dataset.feature_count();
    if (width == 0) throw ValidationError("dataset declares no features");
    for (const Instance& inst : dataset.instances) {
        if (inst.features.size() != width) {
            throw ValidationError("instance feature width differs from dataset declaration");
        }
        if (inst.label >= dataset.class_names.size()) {
            throw ValidationError("instance label outside the declared class set");
        }
    }
}

std::unique_ptr<Model> train_model(Algorithm algorithm, const Dataset& dataset,
                                   const TrainerConfig& config, std::uint64_t seed) {
    switch (algorithm) {
        case Algorithm::Knn: return train_knn(dataset, config.knn);
        case Algorithm::J48: return train_j48(dataset, config.j48);
        case Algorithm::RandomForest: return train_random_forest(dataset, config.forest, seed);
        case Algorithm::RepTree: return train_reptree(dataset, config.reptree, seed);
        case Algorithm::DecisionTable: return train_decision_table(dataset, config.table);
        case Algorithm::LogitBoost: return train_logitboost(dataset, config.boost);
    }
    throw ValidationError("unknown algorithm");
}

}  // namespace pondwatch::ml

namespace pondwatch::ml::detail {

json model_header(const Model& model) {
    json doc;
    doc["format"] = "pondwatch-model";
    doc["version"] = 1;
    doc["algorithm"] = std::string(algorithm_tag(model.algorithm()));
    doc["class_names"] = model.class_names();
    doc["feature_count"] = model.feature_count();
    return doc;
}

void check_header(const json& doc, std::string_view expected_tag) {
    if (doc.value("format", "") != "pondwatch-model" || doc.value("version", 0) != 1) {
        throw ValidationError("not a version-1 pondwatch model document");
    }
    if (doc.at("algorithm").get<std::string>() != expected_tag) {
        throw ValidationError("model document carries a different algorithm tag");
    }
}

}  // namespace pondwatch::ml::detail
