#include <algorithm>
#include <cmath>

#include "models_detail.hpp"

namespace pondwatch::ml {
namespace {

using detail::LogitBoostModel;

constexpr double kZMax = 3.0;       // working-response clamp
constexpr double kMinWeight = 1e-12;

// Weighted least-squares regression stump. A no-split constant is the
// baseline; a threshold replaces it only when strictly better.
LogitBoostModel::Stump fit_stump(const Dataset& dataset, const std::vector<double>& z,
                                 const std::vector<double>& w) {
    const std::size_t n = dataset.size();
    double w_total = 0.0, wz_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w_total += w[i];
        wz_total += w[i] * z[i];
    }
    const double constant = w_total > 0.0 ? wz_total / w_total : 0.0;

    LogitBoostModel::Stump best;
    best.feature = -1;
    best.left = best.right = constant;
    // SSE of the constant fit, up to the common sum(w z^2) term which
    // cancels in comparisons: -S^2/W.
    double best_score = w_total > 0.0 ? -(wz_total * wz_total) / w_total : 0.0;

    const std::size_t width = dataset.feature_count();
    std::vector<std::pair<double, std::size_t>> ordered(n);
    for (std::size_t f = 0; f < width; ++f) {
        for (std::size_t i = 0; i < n; ++i) {
            ordered[i] = {dataset.instances[i].features[f], i};
        }
        std::sort(ordered.begin(), ordered.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        double wl = 0.0, swl = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const std::size_t idx = ordered[i].second;
            wl += w[idx];
            swl += w[idx] * z[idx];
            if (ordered[i].first == ordered[i + 1].first) continue;
            const double wr = w_total - wl;
            if (wl <= 0.0 || wr <= 0.0) continue;
            const double swr = wz_total - swl;
            const double score = -(swl * swl) / wl - (swr * swr) / wr;
            if (score < best_score - 1e-12) {
                best_score = score;
                best.feature = static_cast<int>(f);
                best.threshold = (ordered[i].first + ordered[i + 1].first) / 2.0;
                best.left = swl / wl;
                best.right = swr / wr;
            }
        }
    }
    return best;
}

}  // namespace

std::unique_ptr<Model> train_logitboost(const Dataset& dataset, const LogitBoostParams& params) {
    validate_training_data(dataset);
    const std::size_t classes = dataset.class_names.size();
    std::vector<std::int64_t> counts = dataset.class_counts();
    const std::size_t populated =
        static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(),
                                               [](std::int64_t c) { return c > 0; }));
    if (classes < 2 || populated < 2) {
        throw ValidationError("boosting needs at least two populated classes");
    }

    const std::size_t n = dataset.size();
    const double j = static_cast<double>(classes);
    std::vector<std::vector<double>> scores(classes, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> probs(classes, std::vector<double>(n, 1.0 / j));

    std::vector<std::vector<LogitBoostModel::Stump>> rounds;
    std::vector<double> z(n), w(n), h(classes);
    for (std::size_t m = 0; m < params.iterations; ++m) {
        std::vector<LogitBoostModel::Stump> round(classes);
        for (std::size_t k = 0; k < classes; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p = probs[k][i];
                const double y = dataset.instances[i].label == k ? 1.0 : 0.0;
                const double pq = std::max(p * (1.0 - p), kMinWeight);
                z[i] = std::clamp((y - p) / pq, -kZMax, kZMax);
                w[i] = pq;
            }
            round[k] = fit_stump(dataset, z, w);
        }

        // Centered multi-class update: F_k += (J-1)/J (h_k - mean h).
        for (std::size_t i = 0; i < n; ++i) {
            double mean = 0.0;
            for (std::size_t k = 0; k < classes; ++k) {
                h[k] = round[k].eval(dataset.instances[i].features);
                mean += h[k];
            }
            mean /= j;
            for (std::size_t k = 0; k < classes; ++k) {
                scores[k][i] += (j - 1.0) / j * (h[k] - mean);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            double max_score = scores[0][i];
            for (std::size_t k = 1; k < classes; ++k) max_score = std::max(max_score, scores[k][i]);
            double denom = 0.0;
            for (std::size_t k = 0; k < classes; ++k) denom += std::exp(scores[k][i] - max_score);
            for (std::size_t k = 0; k < classes; ++k) {
                probs[k][i] = std::exp(scores[k][i] - max_score) / denom;
            }
        }
        rounds.push_back(std::move(round));
    }
    return std::make_unique<LogitBoostModel>(dataset.class_names, dataset.feature_count(),
                                             std::move(rounds));
}

}  // namespace pondwatch::ml

namespace pondwatch::ml::detail {

std::vector<double> LogitBoostModel::scores(const std::vector<double>& features) const {
    const std::size_t classes = class_names().size();
    std::vector<double> f(classes, 0.0), h(classes);
    const double j = static_cast<double>(classes);
    for (const std::vector<Stump>& round : rounds_) {
        double mean = 0.0;
        for (std::size_t k = 0; k < classes; ++k) {
            h[k] = round[k].eval(features);
            mean += h[k];
        }
        mean /= j;
        for (std::size_t k = 0; k < classes; ++k) f[k] += (j - 1.0) / j * (h[k] - mean);
    }
    return f;
}

std::size_t LogitBoostModel::predict(const std::vector<double>& features) const {
    return argmax_class(scores(features));
}

std::string LogitBoostModel::serialize() const {
    json doc = model_header(*this);
    json rounds = json::array();
    for (const std::vector<Stump>& round : rounds_) {
        json stumps = json::array();
        for (const Stump& s : round) {
            stumps.push_back({{"feature", s.feature},
                              {"threshold", s.threshold},
                              {"left", s.left},
                              {"right", s.right}});
        }
        rounds.push_back(std::move(stumps));
    }
    doc["rounds"] = std::move(rounds);
    return doc.dump();
}

std::unique_ptr<Model> LogitBoostModel::from_json(const json& doc) {
    check_header(doc, "logitboost");
    std::vector<std::vector<Stump>> rounds;
    for (const json& round : doc.at("rounds")) {
        std::vector<Stump> stumps;
        for (const json& s : round) {
            stumps.push_back(Stump{s.at("feature").get<int>(), s.at("threshold").get<double>(),
                                   s.at("left").get<double>(), s.at("right").get<double>()});
        }
        rounds.push_back(std::move(stumps));
    }
    return std::make_unique<LogitBoostModel>(
        doc.at("class_names").get<std::vector<std::string>>(),
        doc.at("feature_count").get<std::size_t>(), std::move(rounds));
}

}  // namespace pondwatch::ml::detail
