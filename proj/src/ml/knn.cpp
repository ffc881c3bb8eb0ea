#include <algorithm>
#include <cmath>

#include "models_detail.hpp"

namespace pondwatch::ml {

using detail::KnnModel;

std::unique_ptr<Model> train_knn(const Dataset& dataset, const KnnParams& params) {
    validate_training_data(dataset);
    if (params.k_neighbors < 1 || params.k_neighbors > dataset.size()) {
        throw ValidationError("k_neighbors must be in 1..instance count");
    }

    const std::size_t width = dataset.feature_count();
    std::vector<double> mins(width, 0.0), ranges(width, 0.0);
    for (std::size_t f = 0; f < width; ++f) {
        double lo = dataset.instances.front().features[f];
        double hi = lo;
        for (const Instance& inst : dataset.instances) {
            lo = std::min(lo, inst.features[f]);
            hi = std::max(hi, inst.features[f]);
        }
        mins[f] = lo;
        ranges[f] = hi - lo;
    }

    std::vector<double> rows;
    rows.reserve(dataset.size() * width);
    std::vector<std::size_t> labels;
    labels.reserve(dataset.size());
    for (const Instance& inst : dataset.instances) {
        for (std::size_t f = 0; f < width; ++f) {
            const double r = ranges[f];
            rows.push_back(r > 0.0 ? (inst.features[f] - mins[f]) / r : 0.0);
        }
        labels.push_back(inst.label);
    }
    return std::make_unique<KnnModel>(dataset.class_names, width, params.k_neighbors,
                                      std::move(mins), std::move(ranges), std::move(rows),
                                      std::move(labels));
}

}  // namespace pondwatch::ml

namespace pondwatch::ml::detail {

std::size_t KnnModel::predict(const std::vector<double>& features) const {
    if (features.size() != feature_count()) {
        throw DomainError("feature vector width does not match the model");
    }
    const std::size_t width = feature_count();
    std::vector<double> query(width);
    for (std::size_t f = 0; f < width; ++f) {
        query[f] = range_[f] > 0.0 ? (features[f] - min_[f]) / range_[f] : 0.0;
    }

    const std::size_t n = labels_.size();
    std::vector<std::pair<double, std::size_t>> distances;  // (squared distance, index)
    distances.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        const double* row = rows_.data() + i * width;
        for (std::size_t f = 0; f < width; ++f) {
            const double diff = query[f] - row[f];
            d2 += diff * diff;
        }
        distances.emplace_back(d2, i);
    }
    // Distance ties resolve to the lower training index.
    std::partial_sort(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(k_),
                      distances.end());

    std::vector<double> votes(class_names().size(), 0.0);
    for (std::size_t i = 0; i < k_; ++i) votes[labels_[distances[i].second]] += 1.0;
    return argmax_class(votes);
}

std::string KnnModel::serialize() const {
    json doc = model_header(*this);
    doc["k_neighbors"] = k_;
    doc["feature_min"] = min_;
    doc["feature_range"] = range_;
    doc["rows"] = rows_;
    doc["labels"] = labels_;
    return doc.dump();
}

std::unique_ptr<Model> KnnModel::from_json(const json& doc) {
    check_header(doc, "knn");
    return std::make_unique<KnnModel>(
        doc.at("class_names").get<std::vector<std::string>>(),
        doc.at("feature_count").get<std::size_t>(), doc.at("k_neighbors").get<std::size_t>(),
        doc.at("feature_min").get<std::vector<double>>(),
        doc.at("feature_range").get<std::vector<double>>(),
        doc.at("rows").get<std::vector<double>>(),
        doc.at("labels").get<std::vector<std::size_t>>());
}

}  // namespace pondwatch::ml::detail
