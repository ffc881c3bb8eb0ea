#ifndef PONDWATCH_METRICS_HPP
#define PONDWATCH_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pondwatch/common.hpp"

namespace pondwatch {

// N x N prediction counts; rows are actual classes, columns predicted.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> class_names);

    void add(std::size_t actual, std::size_t predicted, std::int64_t count = 1);

    std::size_t size() const { return class_names_.size(); }
    const std::vector<std::string>& class_names() const { return class_names_; }
    std::size_t class_index(const std::string& name) const;
    std::int64_t at(std::size_t actual, std::size_t predicted) const;
    std::int64_t total() const;
    std::int64_t row_total(std::size_t actual) const;
    std::int64_t column_total(std::size_t predicted) const;

private:
    std::vector<std::string> class_names_;
    std::vector<std::int64_t> counts_;  // row-major
};

// A ratio together with whether its denominator was non-zero. Undefined
// ratios carry value 0 so reports stay totally ordered and serializable.
struct Rate {
    double value = 0.0;
    bool defined = true;
};

double accuracy(const ConfusionMatrix& cm);
Rate precision(const ConfusionMatrix& cm, std::size_t cls);
Rate recall(const ConfusionMatrix& cm, std::size_t cls);
Rate f1(const ConfusionMatrix& cm, std::size_t cls);
double kappa(const ConfusionMatrix& cm);

struct TpFpRates {
    Rate tp_rate;  // equals recall
    Rate fp_rate;
};
TpFpRates tp_fp_rates(const ConfusionMatrix& cm, std::size_t cls);

// Support-weighted mean: sum(value_i * support_i) / sum(support_i).
double weighted_average(const std::vector<double>& values,
                        const std::vector<std::int64_t>& supports);

struct ClassMetrics {
    std::string class_name;
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::int64_t support = 0;  // row total
    Rate precision, recall, f1, tp_rate, fp_rate;
};

struct Report {
    std::string algorithm;
    ConfusionMatrix matrix;
    double accuracy = 0.0;
    double kappa = 0.0;
    std::vector<ClassMetrics> per_class;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    double weighted_tp_rate = 0.0;
    double weighted_fp_rate = 0.0;
};

Report make_report(const std::string& algorithm, const ConfusionMatrix& cm);

// Descending accuracy; ties by kappa, then weighted TP rate, then algorithm
// tag. Returned in rank order 1..n.
std::vector<Report> rank_models(std::vector<Report> reports);

std::string report_text(const Report& report);
std::string report_json(const Report& report);
Report report_from_json(const std::string& text);

// One row per report (already ranked): accuracy %, kappa %, avg TP rate %,
// position, two decimals.
std::string ranking_table_text(const std::vector<Report>& ranked);

}  // namespace pondwatch

#endif
