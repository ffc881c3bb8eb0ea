#ifndef PONDWATCH_ML_MODEL_IO_HPP
#define PONDWATCH_ML_MODEL_IO_HPP

#include <memory>
#include <string>

#include "pondwatch/ml/model.hpp"

namespace pondwatch::ml {

// Inverse of Model::serialize; dispatches on the embedded algorithm tag.
// Throws ValidationError on malformed or unsupported documents.
std::unique_ptr<Model> deserialize_model(const std::string& text);

void save_model(const Model& model, const std::string& path);
std::unique_ptr<Model> load_model(const std::string& path);

}  // namespace pondwatch::ml

#endif
