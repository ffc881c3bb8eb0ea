#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "models_detail.hpp"

namespace pondwatch::ml {
namespace {

constexpr std::size_t kMaxTableFeatures = 8;  // key packs 8 bits per feature

struct Discretizer {
    std::size_t bins;
    std::vector<double> min;    // per dataset feature
    std::vector<double> width;  // (max - min) / bins; 0 for constant features

    std::size_t bin_of(double value, std::size_t feature) const {
        if (width[feature] <= 0.0) return 0;
        const double offset = (value - min[feature]) / width[feature];
        auto bin = static_cast<std::int64_t>(offset);
        if (offset < 0.0) bin = 0;
        if (bin >= static_cast<std::int64_t>(bins)) bin = static_cast<std::int64_t>(bins) - 1;
        return static_cast<std::size_t>(bin);
    }
};

std::uint64_t pack_key(const std::vector<std::size_t>& bins_per_feature) {
    std::uint64_t key = 0;
    for (std::size_t b : bins_per_feature) key = (key << 8) | static_cast<std::uint64_t>(b);
    return key;
}

std::size_t majority_with_names(const std::vector<std::int64_t>& counts,
                                const std::vector<std::string>& names) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (counts[i] > counts[best] || (counts[i] == counts[best] && names[i] < names[best])) {
            best = i;
        }
    }
    return best;
}

// Leave-one-out accuracy of the table over the given feature subset. Each
// instance is predicted from its cell's counts minus itself; an emptied cell
// falls back to the global majority.
double loo_accuracy(const Dataset& dataset, const Discretizer& disc,
                    const std::vector<std::size_t>& subset, std::size_t global_majority) {
    std::unordered_map<std::uint64_t, std::vector<std::int64_t>> cells;
    std::vector<std::uint64_t> keys(dataset.size());
    std::vector<std::size_t> bins(subset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (std::size_t s = 0; s < subset.size(); ++s) {
            bins[s] = disc.bin_of(dataset.instances[i].features[subset[s]], subset[s]);
        }
        keys[i] = pack_key(bins);
        auto [it, inserted] = cells.try_emplace(keys[i]);
        if (inserted) it->second.assign(dataset.class_names.size(), 0);
        it->second[dataset.instances[i].label]++;
    }

    std::size_t correct = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        std::vector<std::int64_t>& counts = cells[keys[i]];
        const std::size_t label = dataset.instances[i].label;
        counts[label]--;
        std::int64_t remaining = 0;
        for (std::int64_t c : counts) remaining += c;
        const std::size_t predicted =
            remaining == 0 ? global_majority
                           : majority_with_names(counts, dataset.class_names);
        counts[label]++;
        if (predicted == label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

struct SubsetScore {
    double accuracy = -1.0;
    std::vector<std::size_t> subset;

    // Higher accuracy, then fewer features, then earlier feature indices.
    bool better_than(const SubsetScore& other) const {
        if (accuracy != other.accuracy) return accuracy > other.accuracy;
        if (subset.size() != other.subset.size()) return subset.size() < other.subset.size();
        return subset < other.subset;
    }
};

}  // namespace

std::unique_ptr<Model> train_decision_table(const Dataset& dataset,
                                            const DecisionTableParams& params) {
    validate_training_data(dataset);
    if (params.bins < 2 || params.bins > 256) throw ValidationError("bins outside 2..256");

    const std::size_t width = dataset.feature_count();
    Discretizer disc{params.bins, std::vector<double>(width), std::vector<double>(width)};
    for (std::size_t f = 0; f < width; ++f) {
        double lo = dataset.instances.front().features[f];
        double hi = lo;
        for (const Instance& inst : dataset.instances) {
            lo = std::min(lo, inst.features[f]);
            hi = std::max(hi, inst.features[f]);
        }
        disc.min[f] = lo;
        disc.width[f] = (hi - lo) / static_cast<double>(params.bins);
    }

    std::vector<std::int64_t> totals = dataset.class_counts();
    const std::size_t global_majority = majority_with_names(totals, dataset.class_names);

    // Best-first forward selection over feature subsets by LOO accuracy.
    SubsetScore best{loo_accuracy(dataset, disc, {}, global_majority), {}};
    std::vector<SubsetScore> open = {best};
    std::set<std::vector<std::size_t>> visited = {{}};
    std::size_t stale = 0;
    while (!open.empty() && stale < params.stale_limit) {
        auto top = std::min_element(open.begin(), open.end(),
                                    [](const SubsetScore& a, const SubsetScore& b) {
                                        return a.better_than(b);
                                    });
        SubsetScore current = *top;
        open.erase(top);

        bool improved = false;
        for (std::size_t f = 0; f < width; ++f) {
            if (std::find(current.subset.begin(), current.subset.end(), f) !=
                current.subset.end()) {
                continue;
            }
            std::vector<std::size_t> candidate = current.subset;
            candidate.insert(std::upper_bound(candidate.begin(), candidate.end(), f), f);
            if (candidate.size() > kMaxTableFeatures) continue;
            if (!visited.insert(candidate).second) continue;
            SubsetScore score{loo_accuracy(dataset, disc, candidate, global_majority),
                              candidate};
            if (score.better_than(best)) {
                best = score;
                improved = true;
            }
            open.push_back(std::move(score));
        }
        stale = improved ? 0 : stale + 1;
    }

    // Materialize the table for the winning subset.
    std::map<std::uint64_t, std::vector<std::int64_t>> cells;
    std::vector<std::size_t> bins(best.subset.size());
    for (const Instance& inst : dataset.instances) {
        for (std::size_t s = 0; s < best.subset.size(); ++s) {
            bins[s] = disc.bin_of(inst.features[best.subset[s]], best.subset[s]);
        }
        auto [it, inserted] = cells.try_emplace(pack_key(bins));
        if (inserted) it->second.assign(dataset.class_names.size(), 0);
        it->second[inst.label]++;
    }
    std::vector<detail::DecisionTableModel::Row> rows;
    rows.reserve(cells.size());
    for (const auto& [key, counts] : cells) {
        rows.push_back({key, majority_with_names(counts, dataset.class_names)});
    }

    std::vector<double> bin_min, bin_width;
    for (std::size_t f : best.subset) {
        bin_min.push_back(disc.min[f]);
        bin_width.push_back(disc.width[f]);
    }
    return std::make_unique<detail::DecisionTableModel>(
        dataset.class_names, width, params.bins, best.subset, std::move(bin_min),
        std::move(bin_width), std::move(rows), global_majority);
}

}  // namespace pondwatch::ml

namespace pondwatch::ml::detail {

std::uint64_t DecisionTableModel::key_for(const std::vector<double>& features) const {
    std::uint64_t key = 0;
    for (std::size_t s = 0; s < selected_.size(); ++s) {
        const double value = features.at(selected_[s]);
        std::size_t bin = 0;
        if (bin_width_[s] > 0.0) {
            const double offset = (value - bin_min_[s]) / bin_width_[s];
            auto b = static_cast<std::int64_t>(offset);
            if (offset < 0.0) b = 0;
            if (b >= static_cast<std::int64_t>(bins_)) b = static_cast<std::int64_t>(bins_) - 1;
            bin = static_cast<std::size_t>(b);
        }
        key = (key << 8) | static_cast<std::uint64_t>(bin);
    }
    return key;
}

std::size_t DecisionTableModel::predict(const std::vector<double>& features) const {
    const std::uint64_t key = key_for(features);
    auto it = std::lower_bound(rows_.begin(), rows_.end(), key,
                               [](const Row& row, std::uint64_t k) { return row.key < k; });
    if (it != rows_.end() && it->key == key) return it->predicted;
    return majority_;  // unmatched row
}

std::string DecisionTableModel::serialize() const {
    json doc = model_header(*this);
    doc["bins"] = bins_;
    doc["selected_features"] = selected_;
    doc["bin_min"] = bin_min_;
    doc["bin_width"] = bin_width_;
    doc["majority_class"] = majority_;
    json rows = json::array();
    for (const Row& row : rows_) rows.push_back({{"key", row.key}, {"class", row.predicted}});
    doc["rows"] = std::move(rows);
    return doc.dump();
}

std::unique_ptr<Model> DecisionTableModel::from_json(const json& doc) {
    check_header(doc, "decision_table");
    std::vector<Row> rows;
    for (const json& r : doc.at("rows")) {
        rows.push_back({r.at("key").get<std::uint64_t>(), r.at("class").get<std::size_t>()});
    }
    return std::make_unique<DecisionTableModel>(
        doc.at("class_names").get<std::vector<std::string>>(),
        doc.at("feature_count").get<std::size_t>(), doc.at("bins").get<std::size_t>(),
        doc.at("selected_features").get<std::vector<std::size_t>>(),
        doc.at("bin_min").get<std::vector<double>>(),
        doc.at("bin_width").get<std::vector<double>>(), std::move(rows),
        doc.at("majority_class").get<std::size_t>());
}

}  // namespace pondwatch::ml::detail
