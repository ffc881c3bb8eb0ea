// Concrete model classes shared between the trainers and model_io. Internal
// to the library; the public surface is Model plus the train_* functions.
#ifndef PONDWATCH_ML_MODELS_DETAIL_HPP
#define PONDWATCH_ML_MODELS_DETAIL_HPP

#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pondwatch/ml/model.hpp"
#include "pondwatch/ml/tree.hpp"

namespace pondwatch::ml::detail {

using nlohmann::json;

class KnnModel final : public Model {
public:
    KnnModel(std::vector<std::string> class_names, std::size_t feature_count,
             std::size_t k_neighbors, std::vector<double> feature_min,
             std::vector<double> feature_range, std::vector<double> normalized_rows,
             std::vector<std::size_t> labels)
        : Model(std::move(class_names), feature_count),
          k_(k_neighbors),
          min_(std::move(feature_min)),
          range_(std::move(feature_range)),
          rows_(std::move(normalized_rows)),
          labels_(std::move(labels)) {}

    Algorithm algorithm() const override { return Algorithm::Knn; }
    std::size_t predict(const std::vector<double>& features) const override;
    std::string serialize() const override;
    static std::unique_ptr<Model> from_json(const json& doc);

private:
    std::size_t k_;
    std::vector<double> min_;
    std::vector<double> range_;  // max - min; 0 for constant features
    std::vector<double> rows_;   // n x F, row-major, min-max normalized
    std::vector<std::size_t> labels_;
};

class TreeModel final : public Model {
public:
    TreeModel(Algorithm algorithm, std::vector<std::string> class_names,
              std::size_t feature_count, Tree tree)
        : Model(std::move(class_names), feature_count),
          algorithm_(algorithm),
          tree_(std::move(tree)) {}

    Algorithm algorithm() const override { return algorithm_; }
    std::size_t predict(const std::vector<double>& features) const override;
    std::string serialize() const override;
    static std::unique_ptr<Model> from_json(const json& doc);

    const Tree& tree() const { return tree_; }

private:
    Algorithm algorithm_;
    Tree tree_;
};

class ForestModel final : public Model {
public:
    ForestModel(std::vector<std::string> class_names, std::size_t feature_count,
                std::vector<Tree> trees)
        : Model(std::move(class_names), feature_count), trees_(std::move(trees)) {}

    Algorithm algorithm() const override { return Algorithm::RandomForest; }
    std::size_t predict(const std::vector<double>& features) const override;
    std::string serialize() const override;
    static std::unique_ptr<Model> from_json(const json& doc);

    std::vector<std::int64_t> vote_counts(const std::vector<double>& features) const;
    const std::vector<Tree>& trees() const { return trees_; }

private:
    std::vector<Tree> trees_;
};

class DecisionTableModel final : public Model {
public:
    struct Row {
        std::uint64_t key = 0;
        std::size_t predicted = 0;
    };

    DecisionTableModel(std::vector<std::string> class_names, std::size_t feature_count,
                       std::size_t bins, std::vector<std::size_t> selected,
                       std::vector<double> bin_min, std::vector<double> bin_width,
                       std::vector<Row> rows, std::size_t majority_class)
        : Model(std::move(class_names), feature_count),
          bins_(bins),
          selected_(std::move(selected)),
          bin_min_(std::move(bin_min)),
          bin_width_(std::move(bin_width)),
          rows_(std::move(rows)),
          majority_(majority_class) {}

    Algorithm algorithm() const override { return Algorithm::DecisionTable; }
    std::size_t predict(const std::vector<double>& features) const override;
    std::string serialize() const override;
    static std::unique_ptr<Model> from_json(const json& doc);

    const std::vector<std::size_t>& selected_features() const { return selected_; }

    std::uint64_t key_for(const std::vector<double>& features) const;

private:
    std::size_t bins_;
    std::vector<std::size_t> selected_;
    std::vector<double> bin_min_;    // aligned with selected_
    std::vector<double> bin_width_;  // 0 for constant features
    std::vector<Row> rows_;          // sorted by key
    std::size_t majority_;
};

class LogitBoostModel final : public Model {
public:
    struct Stump {
        int feature = -1;  // -1 means constant output `left`
        double threshold = 0.0;
        double left = 0.0;
        double right = 0.0;

        double eval(const std::vector<double>& features) const {
            if (feature < 0) return left;
            return features[static_cast<std::size_t>(feature)] <= threshold ? left : right;
        }
    };

    LogitBoostModel(std::vector<std::string> class_names, std::size_t feature_count,
                    std::vector<std::vector<Stump>> rounds)
        : Model(std::move(class_names), feature_count), rounds_(std::move(rounds)) {}

    Algorithm algorithm() const override { return Algorithm::LogitBoost; }
    std::size_t predict(const std::vector<double>& features) const override;
    std::string serialize() const override;
    static std::unique_ptr<Model> from_json(const json& doc);

    // Additive per-class scores after all rounds.
    std::vector<double> scores(const std::vector<double>& features) const;

private:
    std::vector<std::vector<Stump>> rounds_;  // [iteration][class]
};

// Shared serialization helpers.
json tree_to_json(const Tree& tree);
Tree tree_from_json(const json& doc);
json model_header(const Model& model);
void check_header(const json& doc, std::string_view expected_tag);

}  // namespace pondwatch::ml::detail

#endif
