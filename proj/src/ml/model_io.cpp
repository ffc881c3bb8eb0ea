#include "pondwatch/ml/model_io.hpp"

#include <fstream>
#include <sstream>

#include "models_detail.hpp"

namespace pondwatch::ml {

std::unique_ptr<Model> deserialize_model(const std::string& text) {
    detail::json doc;
    try {
        doc = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw ValidationError(std::string("model document is not valid JSON: ") + e.what());
    }
    const auto tag = doc.value("algorithm", "");
    const auto algorithm = parse_algorithm(tag);
    if (!algorithm) throw ValidationError("unknown model algorithm tag: " + tag);
    switch (*algorithm) {
        case Algorithm::Knn: return detail::KnnModel::from_json(doc);
        case Algorithm::J48:
        case Algorithm::RepTree: return detail::TreeModel::from_json(doc);
        case Algorithm::RandomForest: return detail::ForestModel::from_json(doc);
        case Algorithm::DecisionTable: return detail::DecisionTableModel::from_json(doc);
        case Algorithm::LogitBoost: return detail::LogitBoostModel::from_json(doc);
    }
    throw ValidationError("unknown model algorithm tag: " + tag);
}

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write model file: " + path);
    out << model.serialize() << '\n';
    if (!out) throw ValidationError("failed writing model file: " + path);
}

std::unique_ptr<Model> load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

}  // namespace pondwatch::ml
