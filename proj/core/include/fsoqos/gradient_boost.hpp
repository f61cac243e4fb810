#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fsoqos/table.hpp"
#include "fsoqos/tree.hpp"

namespace fsoqos::learners {

struct GradientBoostOptions {
    std::size_t n_trees = 100;
    /// Shrinkage, strictly inside (0, 1).
    double learning_rate = 0.1;
    std::size_t min_leaf_size = 1;
    /// 0 means unbounded.
    std::size_t max_depth = 0;
};

/// Squared-loss gradient boosting: F_0 = mean(y), F_n = F_{n-1} + rate * tree_n.
class GradientBoostModel {
public:
    GradientBoostModel() = default;
    GradientBoostModel(double init_value, std::vector<RegressionTree> trees, GradientBoostOptions options,
                       std::size_t n_features);

    double predict(std::span<const double> x) const;
    /// Prediction using only the first `stages` trees (at most trees().size()).
    double predict_staged(std::span<const double> x, std::size_t stages) const;

    double init_value() const noexcept { return init_value_; }
    double learning_rate() const noexcept { return options_.learning_rate; }
    const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
    const GradientBoostOptions& options() const noexcept { return options_; }
    std::size_t n_features() const noexcept { return n_features_; }

private:
    double init_value_ = 0.0;
    std::vector<RegressionTree> trees_;
    GradientBoostOptions options_;
    std::size_t n_features_ = 0;
};

GradientBoostModel fit_gradient_boost(const LabeledTable& data, const GradientBoostOptions& options = {});

double predict_gradient_boost(const GradientBoostModel& model, std::span<const double> x);

}  // namespace fsoqos::learners
