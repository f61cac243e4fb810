#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fsoqos/model.hpp"
#include "fsoqos/stacking.hpp"

namespace fsoqos {

using AnyModel = std::variant<learners::RegressionTree, learners::RandomForestModel, learners::GradientBoostModel,
                              learners::AdaBoostModel, stacking::StackedModel, neural::MlpModel>;

struct ModelFile {
    AnyModel model;
    std::vector<std::string> feature_names;
    std::uint64_t seed = 0;
};

/// "tree", "forest", "gbr", "adaboost", "stacked" or "mlp".
std::string_view model_type(const AnyModel& model);
AnyModel to_any(learners::BaseModel model);
double predict_any(const AnyModel& model, std::span<const double> x);
std::size_t n_features(const AnyModel& model);

/// JSON document:
///   {"format": "fsoqos-model", "version": 1, "type", "seed", "feature_names",
///    "hyperparameters": {...}, "model": {...}}
/// Tree nodes nest as {"feature", "threshold", "value", "left", "right"},
/// leaves as {"value"}. Stacked models embed each base model as
/// {"type", "hyperparameters", "model"} next to "weights".
std::string serialize_model(const ModelFile& file);
/// Throws SchemaError on malformed or inconsistent documents.
ModelFile deserialize_model(std::string_view text);

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace fsoqos
