#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "fsoqos/adaboost.hpp"
#include "fsoqos/gradient_boost.hpp"
#include "fsoqos/neural.hpp"
#include "fsoqos/random_forest.hpp"
#include "fsoqos/tree.hpp"

namespace fsoqos::learners {

struct TreeSpec {
    TreeOptions options;
};

struct ForestSpec {
    ForestOptions options;
};

struct GradientBoostSpec {
    GradientBoostOptions options;
};

struct AdaBoostR2Spec {
    AdaBoostR2Options options;
};

struct MlpSpec {
    std::vector<std::size_t> hidden_layers{10};
    neural::ActivationKind hidden = neural::ActivationKind::Sigmoid;
    neural::ActivationKind output = neural::ActivationKind::Direct;
    neural::TrainConfig train;
};

using LearnerSpec = std::variant<TreeSpec, ForestSpec, GradientBoostSpec, AdaBoostR2Spec, MlpSpec>;
using BaseModel = std::variant<RegressionTree, RandomForestModel, GradientBoostModel, AdaBoostModel, neural::MlpModel>;

/// "tree", "forest", "gbr", "adbr-r2" or "mlp".
std::string_view learner_name(const LearnerSpec& spec);
std::string_view model_name(const BaseModel& model);

/// The seed overrides any seed stored in the spec, so one global seed drives every fit.
BaseModel fit_learner(const LearnerSpec& spec, const LabeledTable& data, std::uint64_t seed);
double predict(const BaseModel& model, std::span<const double> x);
std::size_t n_features(const BaseModel& model);

}  // namespace fsoqos::learners
