#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fsoqos/model.hpp"
#include "fsoqos/table.hpp"

namespace fsoqos::stacking {

struct StackConfig {
    std::vector<learners::LearnerSpec> base_learners;
    std::size_t n_folds = 5;
    std::uint64_t seed = 0;

    void validate(std::size_t rows) const;
};

/// Shuffled partition of {0..m-1} into H folds; the first m % H folds hold
/// one extra row. Each fold is returned in ascending order.
std::vector<std::vector<std::size_t>> kfold_partition(std::size_t m, std::size_t n_folds, std::uint64_t seed);

using Predictor = std::function<double(std::span<const double>)>;
/// Fits on the given table and returns a predictor for unseen rows.
using Trainer = std::function<Predictor(const LabeledTable&)>;

struct NamedTrainer {
    std::string name;
    Trainer fit;
};

/// Level-1 sample: column l of row j is the prediction of learner l trained
/// on every fold except the one holding j. Targets and groups are copied.
/// Any failure is rethrown as TrainingError naming the fold and learner.
LabeledTable build_level1_sample(const LabeledTable& data, std::span<const NamedTrainer> trainers,
                                 const std::vector<std::vector<std::size_t>>& folds);

LabeledTable build_level1_sample(const LabeledTable& data, const StackConfig& cfg);

/// Sum of squared residuals of the weighted combination of level-1 columns.
double stacking_objective(const LabeledTable& level1, std::span<const double> weights);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

struct WeightSolution {
    std::vector<double> weights;
    double objective = 0.0;
    std::size_t iterations = 0;
};

/// Minimizes stacking_objective over the simplex by projected gradient with
/// step 1/Lambda, starting from the best single column.
WeightSolution solve_stacking_weights(const LabeledTable& level1);

class StackedModel {
public:
    StackedModel() = default;
    StackedModel(std::vector<learners::BaseModel> base_models, std::vector<double> weights, std::size_t n_folds,
                 std::uint64_t seed);

    double predict(std::span<const double> x) const;
    /// Per-learner predictions, in base-model order.
    std::vector<double> base_predictions(std::span<const double> x) const;

    const std::vector<learners::BaseModel>& base_models() const noexcept { return base_models_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t n_folds() const noexcept { return n_folds_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t n_features() const noexcept { return n_features_; }

private:
    std::vector<learners::BaseModel> base_models_;
    std::vector<double> weights_;
    std::size_t n_folds_ = 0;
    std::uint64_t seed_ = 0;
    std::size_t n_features_ = 0;
};

StackedModel fit_stacked(const LabeledTable& data, const StackConfig& cfg);
double predict_stacked(const StackedModel& model, std::span<const double> x);

}  // namespace fsoqos::stacking
