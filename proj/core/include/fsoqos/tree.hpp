#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fsoqos/table.hpp"

namespace fsoqos::learners {

/// Flat-array node. Leaves have feature == -1; internal nodes route
/// x[feature] <= threshold to `left`, everything else to `right`.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double value = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;

    bool is_leaf() const noexcept { return feature < 0; }
};

struct TreeOptions {
    /// Smallest admissible child; nodes with <= min_leaf_size rows are leaves.
    std::size_t min_leaf_size = 1;
    /// 0 means unbounded.
    std::size_t max_depth = 0;
};

class RegressionTree {
public:
    RegressionTree() = default;
    /// Node 0 is the root. Throws std::domain_error on malformed node arrays.
    RegressionTree(std::vector<TreeNode> nodes, std::size_t n_features, TreeOptions options);

    double predict(std::span<const double> x) const;

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    std::size_t n_features() const noexcept { return n_features_; }
    const TreeOptions& options() const noexcept { return options_; }
    std::size_t leaf_count() const;
    std::size_t depth() const;

private:
    std::vector<TreeNode> nodes_;
    std::size_t n_features_ = 0;
    TreeOptions options_;
};

/// Greedy least-squares CART. Split candidates are midpoints between
/// consecutive distinct values; ties in gain go to the lowest feature index,
/// then the lowest threshold. `feature_subset` restricts every split to the
/// listed columns.
RegressionTree fit_regression_tree(const LabeledTable& data, const TreeOptions& options = {},
                                   const std::optional<std::vector<std::size_t>>& feature_subset = std::nullopt);

/// Weighted variant: split gain and leaf values use per-row weights.
RegressionTree fit_regression_tree_weighted(const LabeledTable& data, std::span<const double> weights,
                                            const TreeOptions& options = {});

double predict_tree(const RegressionTree& tree, std::span<const double> x);

namespace detail {

/// Picks candidate columns for one split; receives the feature count.
using FeatureSampler = std::function<std::vector<std::size_t>(std::size_t)>;

/// Core builder shared by the ensembles. `rows` may repeat indices
/// (bootstrap); `weights`, when non-empty, is indexed by table row.
RegressionTree build_tree(const LabeledTable& data, std::span<const std::size_t> rows,
                          std::span<const double> weights, const TreeOptions& options,
                          const FeatureSampler& sampler);

}  // namespace detail

}  // namespace fsoqos::learners
