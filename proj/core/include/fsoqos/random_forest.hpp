#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fsoqos/table.hpp"
#include "fsoqos/tree.hpp"

namespace fsoqos::learners {

struct ForestOptions {
    std::size_t n_trees = 100;
    /// Features tried per split; 0 selects ceil(k / 3).
    std::size_t mtry = 0;
    std::size_t min_leaf_size = 1;
    std::size_t max_depth = 0;
    /// When false every tree sees the full sample once (no resampling).
    bool bootstrap = true;
    std::uint64_t seed = 0;
    /// Worker threads; 0 uses the hardware concurrency. Results do not
    /// depend on this value.
    std::size_t threads = 0;
};

/// ceil(k / 3), at least 1.
std::size_t default_regression_mtry(std::size_t n_features);
/// ceil(sqrt(k)), at least 1.
std::size_t default_classification_mtry(std::size_t n_features);

class RandomForestModel {
public:
    RandomForestModel() = default;
    RandomForestModel(std::vector<RegressionTree> trees, ForestOptions options, std::optional<double> oob_error);

    double predict(std::span<const double> x) const;

    const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
    const ForestOptions& options() const noexcept { return options_; }
    std::size_t mtry() const noexcept { return options_.mtry; }
    std::uint64_t seed() const noexcept { return options_.seed; }
    /// Mean squared out-of-bag error over rows left out by at least one tree.
    std::optional<double> oob_error() const noexcept { return oob_error_; }
    std::size_t n_features() const noexcept { return trees_.empty() ? 0 : trees_.front().n_features(); }

private:
    std::vector<RegressionTree> trees_;
    ForestOptions options_;
    std::optional<double> oob_error_;
};

/// Bagged CART with a fresh random feature subset of size mtry at every split.
/// Tree t draws from an independent stream derived from (seed, t), so the
/// fit is bit-identical for any thread count.
RandomForestModel fit_random_forest(const LabeledTable& data, ForestOptions options);

double predict_random_forest(const RandomForestModel& model, std::span<const double> x);

}  // namespace fsoqos::learners
