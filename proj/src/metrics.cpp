#include "pondwatch/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pondwatch {
namespace {

using nlohmann::json;

Rate ratio(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) return Rate{0.0, false};
    return Rate{static_cast<double>(numerator) / static_cast<double>(denominator), true};
}

struct CellCounts {
    std::int64_t tp, fp, fn, tn;
};

CellCounts cell_counts(const ConfusionMatrix& cm, std::size_t cls) {
    const std::int64_t tp = cm.at(cls, cls);
    const std::int64_t fp = cm.column_total(cls) - tp;
    const std::int64_t fn = cm.row_total(cls) - tp;
    const std::int64_t tn = cm.total() - tp - fp - fn;
    return {tp, fp, fn, tn};
}

void require_nonempty(const ConfusionMatrix& cm) {
    if (cm.size() == 0 || cm.total() == 0) throw DomainError("empty confusion matrix");
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : class_names_(std::move(class_names)),
      counts_(class_names_.size() * class_names_.size(), 0) {}

void ConfusionMatrix::add(std::size_t actual, std::size_t predicted, std::int64_t count) {
    if (actual >= size() || predicted >= size()) throw DomainError("class index out of range");
    counts_[actual * size() + predicted] += count;
}

std::size_t ConfusionMatrix::class_index(const std::string& name) const {
    auto it = std::find(class_names_.begin(), class_names_.end(), name);
    if (it == class_names_.end()) throw DomainError("unknown class: " + name);
    return static_cast<std::size_t>(it - class_names_.begin());
}

std::int64_t ConfusionMatrix::at(std::size_t actual, std::size_t predicted) const {
    if (actual >= size() || predicted >= size()) throw DomainError("class index out of range");
    return counts_[actual * size() + predicted];
}

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::row_total(std::size_t actual) const {
    std::int64_t sum = 0;
    for (std::size_t c = 0; c < size(); ++c) sum += at(actual, c);
    return sum;
}

std::int64_t ConfusionMatrix::column_total(std::size_t predicted) const {
    std::int64_t sum = 0;
    for (std::size_t r = 0; r < size(); ++r) sum += at(r, predicted);
    return sum;
}

double accuracy(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    std::int64_t trace = 0;
    for (std::size_t i = 0; i < cm.size(); ++i) trace += cm.at(i, i);
    return static_cast<double>(trace) / static_cast<double>(cm.total());
}

Rate precision(const ConfusionMatrix& cm, std::size_t cls) {
    require_nonempty(cm);
    const auto c = cell_counts(cm, cls);
    return ratio(c.tp, c.tp + c.fp);
}

Rate recall(const ConfusionMatrix& cm, std::size_t cls) {
    require_nonempty(cm);
    const auto c = cell_counts(cm, cls);
    return ratio(c.tp, c.tp + c.fn);
}

Rate f1(const ConfusionMatrix& cm, std::size_t cls) {
    const Rate p = precision(cm, cls);
    const Rate r = recall(cm, cls);
    if (p.value + r.value == 0.0) return Rate{0.0, false};
    return Rate{2.0 * p.value * r.value / (p.value + r.value), true};
}

double kappa(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    const double total = static_cast<double>(cm.total());
    const double p_o = accuracy(cm);
    double p_e = 0.0;
    for (std::size_t k = 0; k < cm.size(); ++k) {
        p_e += static_cast<double>(cm.row_total(k)) * static_cast<double>(cm.column_total(k));
    }
    p_e /= total * total;
    if (p_e == 1.0) return 0.0;
    return (p_o - p_e) / (1.0 - p_e);
}

TpFpRates tp_fp_rates(const ConfusionMatrix& cm, std::size_t cls) {
    require_nonempty(cm);
    const auto c = cell_counts(cm, cls);
    return TpFpRates{ratio(c.tp, c.tp + c.fn), ratio(c.fp, c.fp + c.tn)};
}

double weighted_average(const std::vector<double>& values,
                        const std::vector<std::int64_t>& supports) {
    if (values.size() != supports.size()) {
        throw DomainError("values and supports differ in length");
    }
    const std::int64_t total = std::accumulate(supports.begin(), supports.end(), std::int64_t{0});
    if (total <= 0) throw DomainError("supports must sum to a positive total");
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum += values[i] * static_cast<double>(supports[i]);
    }
    return sum / static_cast<double>(total);
}

Report make_report(const std::string& algorithm, const ConfusionMatrix& cm) {
    require_nonempty(cm);
    Report report;
    report.algorithm = algorithm;
    report.matrix = cm;
    report.accuracy = accuracy(cm);
    report.kappa = kappa(cm);

    std::vector<double> precisions, recalls, f1s, fps;
    std::vector<std::int64_t> supports;
    for (std::size_t k = 0; k < cm.size(); ++k) {
        ClassMetrics m;
        m.class_name = cm.class_names()[k];
        const auto c = cell_counts(cm, k);
        m.tp = c.tp; m.fp = c.fp; m.fn = c.fn; m.tn = c.tn;
        m.support = cm.row_total(k);
        m.precision = precision(cm, k);
        m.recall = recall(cm, k);
        m.f1 = f1(cm, k);
        const auto rates = tp_fp_rates(cm, k);
        m.tp_rate = rates.tp_rate;
        m.fp_rate = rates.fp_rate;
        precisions.push_back(m.precision.value);
        recalls.push_back(m.recall.value);
        f1s.push_back(m.f1.value);
        fps.push_back(m.fp_rate.value);
        supports.push_back(m.support);
        report.per_class.push_back(std::move(m));
    }
    report.weighted_precision = weighted_average(precisions, supports);
    report.weighted_recall = weighted_average(recalls, supports);
    report.weighted_f1 = weighted_average(f1s, supports);
    report.weighted_tp_rate = report.weighted_recall;
    report.weighted_fp_rate = weighted_average(fps, supports);
    return report;
}

std::vector<Report> rank_models(std::vector<Report> reports) {
    std::stable_sort(reports.begin(), reports.end(), [](const Report& a, const Report& b) {
        if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
        if (a.kappa != b.kappa) return a.kappa > b.kappa;
        if (a.weighted_tp_rate != b.weighted_tp_rate) {
            return a.weighted_tp_rate > b.weighted_tp_rate;
        }
        return a.algorithm < b.algorithm;
    });
    return reports;
}

std::string report_text(const Report& r) {
    std::ostringstream out;
    const std::int64_t total = r.matrix.total();
    std::int64_t correct = 0;
    for (std::size_t i = 0; i < r.matrix.size(); ++i) correct += r.matrix.at(i, i);

    out << "=== " << r.algorithm << " ===\n\n=== Summary ===\n\n";
    out << "Correctly Classified Instances    " << correct << "    "
        << format_fixed(100.0 * r.accuracy, 4) << " %\n";
    out << "Incorrectly Classified Instances  " << (total - correct) << "    "
        << format_fixed(100.0 * (1.0 - r.accuracy), 4) << " %\n";
    out << "Kappa statistic                   " << format_fixed(r.kappa, 4) << "\n";
    out << "Total Number of Instances         " << total << "\n";

    out << "\n=== Detailed Accuracy By Class ===\n\n";
    out << "TP Rate  FP Rate  Precision  Recall  F-Measure  Class\n";
    auto cell = [](const Rate& rate) { return format_fixed(rate.value, 3); };
    for (const ClassMetrics& m : r.per_class) {
        out << cell(m.tp_rate) << "    " << cell(m.fp_rate) << "    " << cell(m.precision)
            << "      " << cell(m.recall) << "   " << cell(m.f1) << "      " << m.class_name
            << "\n";
    }
    out << format_fixed(r.weighted_tp_rate, 3) << "    " << format_fixed(r.weighted_fp_rate, 3)
        << "    " << format_fixed(r.weighted_precision, 3) << "      "
        << format_fixed(r.weighted_recall, 3) << "   " << format_fixed(r.weighted_f1, 3)
        << "      Weighted Avg.\n";

    out << "\n=== Confusion Matrix ===\n\n";
    for (std::size_t a = 0; a < r.matrix.size(); ++a) {
        for (std::size_t p = 0; p < r.matrix.size(); ++p) {
            out << r.matrix.at(a, p) << (p + 1 < r.matrix.size() ? ' ' : ' ');
        }
        out << "<- " << r.matrix.class_names()[a] << "\n";
    }
    return out.str();
}

std::string report_json(const Report& r) {
    json doc;
    doc["schema_version"] = 1;
    doc["algorithm"] = r.algorithm;
    doc["accuracy"] = r.accuracy;
    doc["kappa"] = r.kappa;
    doc["weighted"] = {{"precision", r.weighted_precision},
                       {"recall", r.weighted_recall},
                       {"f1", r.weighted_f1},
                       {"tp_rate", r.weighted_tp_rate},
                       {"fp_rate", r.weighted_fp_rate}};
    json classes = json::array();
    auto rate = [](const Rate& x) { return json{{"value", x.value}, {"defined", x.defined}}; };
    for (const ClassMetrics& m : r.per_class) {
        classes.push_back({{"class", m.class_name},
                           {"tp", m.tp},
                           {"fp", m.fp},
                           {"fn", m.fn},
                           {"tn", m.tn},
                           {"support", m.support},
                           {"precision", rate(m.precision)},
                           {"recall", rate(m.recall)},
                           {"f1", rate(m.f1)},
                           {"tp_rate", rate(m.tp_rate)},
                           {"fp_rate", rate(m.fp_rate)}});
    }
    doc["classes"] = std::move(classes);
    json matrix;
    matrix["class_names"] = r.matrix.class_names();
    json counts = json::array();
    for (std::size_t a = 0; a < r.matrix.size(); ++a) {
        json row = json::array();
        for (std::size_t p = 0; p < r.matrix.size(); ++p) row.push_back(r.matrix.at(a, p));
        counts.push_back(std::move(row));
    }
    matrix["counts"] = std::move(counts);
    doc["confusion_matrix"] = std::move(matrix);
    return doc.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
    json doc = json::parse(text);
    if (!doc.contains("confusion_matrix") || !doc.contains("algorithm")) {
        throw ValidationError("not a report document");
    }
    const auto& matrix = doc.at("confusion_matrix");
    ConfusionMatrix cm(matrix.at("class_names").get<std::vector<std::string>>());
    const auto& counts = matrix.at("counts");
    for (std::size_t a = 0; a < cm.size(); ++a) {
        for (std::size_t p = 0; p < cm.size(); ++p) {
            cm.add(a, p, counts.at(a).at(p).get<std::int64_t>());
        }
    }
    return make_report(doc.at("algorithm").get<std::string>(), cm);
}

std::string ranking_table_text(const std::vector<Report>& ranked) {
    const std::vector<std::string> headers = {"Model", "Accuracy (%)", "Kappa (%)",
                                              "Avg TP Rate (%)", "Position"};
    std::vector<std::vector<std::string>> rows;
    int position = 1;
    for (const Report& r : ranked) {
        rows.push_back({r.algorithm, format_fixed(100.0 * r.accuracy, 2),
                        format_fixed(100.0 * r.kappa, 2),
                        format_fixed(100.0 * r.weighted_tp_rate, 2),
                        std::to_string(position)});
        ++position;
    }
    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        widths[c] = headers[c].size();
        for (const auto& row : rows) widths[c] = std::max(widths[c], row[c].size());
    }
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << cells[c];
            if (c + 1 < cells.size()) out << std::string(widths[c] - cells[c].size() + 2, ' ');
        }
        out << '\n';
    };
    emit(headers);
    for (const auto& row : rows) emit(row);
    return out.str();
}

}  // namespace pondwatch
