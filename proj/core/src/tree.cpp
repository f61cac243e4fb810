#include "fsoqos/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fsoqos::learners {

RegressionTree::RegressionTree(std::vector<TreeNode> nodes, std::size_t n_features, TreeOptions options)
    : nodes_(std::move(nodes)), n_features_(n_features), options_(options) {
    if (nodes_.empty()) throw std::domain_error("tree has no nodes");
    const auto n = static_cast<std::int32_t>(nodes_.size());
    for (const auto& node : nodes_) {
        if (!std::isfinite(node.value)) throw std::domain_error("non-finite leaf value");
        if (node.is_leaf()) continue;
        if (static_cast<std::size_t>(node.feature) >= n_features_) throw std::domain_error("split feature out of range");
        if (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n) {
            throw std::domain_error("internal node with missing child");
        }
    }
}

double RegressionTree::predict(std::span<const double> x) const {
    require_dimension(x, n_features_);
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
        const auto& node = nodes_[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                  : node.right);
    }
    return nodes_[i].value;
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t RegressionTree::depth() const {
    std::size_t deepest = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (!nodes_[i].is_leaf()) {
            stack.emplace_back(static_cast<std::size_t>(nodes_[i].left), d + 1);
            stack.emplace_back(static_cast<std::size_t>(nodes_[i].right), d + 1);
        }
    }
    return deepest;
}

double predict_tree(const RegressionTree& tree, std::span<const double> x) { return tree.predict(x); }

namespace detail {

namespace {

// Relative slack when comparing split gains; keeps tie-breaking stable
// against rounding differences between equivalent partitions.
constexpr double kGainTolerance = 1e-12;

struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = -1.0;
    std::size_t left_count = 0;
};

struct WorkItem {
    std::size_t node;
    std::vector<std::size_t> rows;
    std::size_t depth;
};

double midpoint(double a, double b) {
    const double mid = a + (b - a) / 2.0;
    return mid < b ? mid : a;
}

class Builder {
public:
    Builder(const LabeledTable& data, std::span<const double> weights, const TreeOptions& options,
            const FeatureSampler& sampler)
        : data_(data), weights_(weights), options_(options), sampler_(sampler) {}

    RegressionTree run(std::span<const std::size_t> rows) {
        nodes_.clear();
        nodes_.emplace_back();
        std::vector<WorkItem> stack;
        stack.push_back({0, std::vector<std::size_t>(rows.begin(), rows.end()), 0});
        while (!stack.empty()) {
            WorkItem item = std::move(stack.back());
            stack.pop_back();
            expand(item, stack);
        }
        return RegressionTree(std::move(nodes_), data_.cols(), options_);
    }

private:
    double weight(std::size_t row) const { return weights_.empty() ? 1.0 : weights_[row]; }

    void expand(WorkItem& item, std::vector<WorkItem>& stack) {
        const auto& rows = item.rows;
        double total_w = 0.0;
        double total_wy = 0.0;
        double lo = rows.empty() ? 0.0 : data_.target(rows.front());
        double hi = lo;
        for (std::size_t r : rows) {
            const double w = weight(r);
            const double y = data_.target(r);
            total_w += w;
            total_wy += w * y;
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
        const double mean = total_w > 0.0 ? total_wy / total_w : 0.0;
        nodes_[item.node].value = mean;

        const bool depth_capped = options_.max_depth != 0 && item.depth >= options_.max_depth;
        if (rows.size() <= options_.min_leaf_size || lo == hi || depth_capped || total_w <= 0.0) return;

        double parent_sse = 0.0;
        for (std::size_t r : rows) {
            const double d = data_.target(r) - mean;
            parent_sse += weight(r) * d * d;
        }

        std::vector<std::size_t> features = sampler_(data_.cols());
        std::sort(features.begin(), features.end());
        Split best;
        std::vector<std::size_t> order;
        for (std::size_t f : features) {
            order = rows;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return data_.at(a, f) < data_.at(b, f); });
            double left_w = 0.0;
            double left_s = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                const double w = weight(order[i]);
                left_w += w;
                left_s += w * (data_.target(order[i]) - mean);
                const double here = data_.at(order[i], f);
                const double next = data_.at(order[i + 1], f);
                if (here == next) continue;
                const std::size_t left_count = i + 1;
                const std::size_t right_count = order.size() - left_count;
                if (left_count < options_.min_leaf_size || right_count < options_.min_leaf_size) continue;
                const double right_w = total_w - left_w;
                if (left_w <= 0.0 || right_w <= 0.0) continue;
                // Centered sums: the right-hand sum is the negation of the left one.
                const double gain = left_s * left_s / left_w + left_s * left_s / right_w;
                if (best.gain < 0.0 || gain > best.gain + kGainTolerance * parent_sse) {
                    best = {f, midpoint(here, next), gain, left_count};
                }
            }
        }
        if (best.gain < 0.0) return;

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (std::size_t r : rows) {
            (data_.at(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);
        }
        const auto left = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_.emplace_back();
        auto& node = nodes_[item.node];
        node.feature = static_cast<std::int32_t>(best.feature);
        node.threshold = best.threshold;
        node.left = left;
        node.right = left + 1;
        stack.push_back({static_cast<std::size_t>(left + 1), std::move(right_rows), item.depth + 1});
        stack.push_back({static_cast<std::size_t>(left), std::move(left_rows), item.depth + 1});
    }

    const LabeledTable& data_;
    std::span<const double> weights_;
    TreeOptions options_;
    const FeatureSampler& sampler_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

RegressionTree build_tree(const LabeledTable& data, std::span<const std::size_t> rows,
                          std::span<const double> weights, const TreeOptions& options,
                          const FeatureSampler& sampler) {
    if (rows.empty()) throw std::domain_error("cannot fit a tree on an empty table");
    if (options.min_leaf_size == 0) throw std::domain_error("min_leaf_size must be positive");
    if (!weights.empty() && weights.size() != data.rows()) throw std::domain_error("one weight per row required");
    Builder builder(data, weights, options, sampler);
    return builder.run(rows);
}

}  // namespace detail

namespace {

std::vector<std::size_t> all_rows(const LabeledTable& data) {
    std::vector<std::size_t> rows(data.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

detail::FeatureSampler all_features() {
    return [](std::size_t k) {
        std::vector<std::size_t> f(k);
        std::iota(f.begin(), f.end(), std::size_t{0});
        return f;
    };
}

}  // namespace

RegressionTree fit_regression_tree(const LabeledTable& data, const TreeOptions& options,
                                   const std::optional<std::vector<std::size_t>>& feature_subset) {
    if (data.empty()) throw std::domain_error("cannot fit a tree on an empty table");
    detail::FeatureSampler sampler = all_features();
    if (feature_subset) {
        if (feature_subset->empty()) throw std::domain_error("feature subset is empty");
        for (std::size_t f : *feature_subset) {
            if (f >= data.cols()) throw std::domain_error("feature subset index out of range");
        }
        sampler = [subset = *feature_subset](std::size_t) { return subset; };
    }
    const auto rows = all_rows(data);
    return detail::build_tree(data, rows, {}, options, sampler);
}

RegressionTree fit_regression_tree_weighted(const LabeledTable& data, std::span<const double> weights,
                                            const TreeOptions& options) {
    if (data.empty()) throw std::domain_error("cannot fit a tree on an empty table");
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::domain_error("weights must be finite and nonnegative");
    }
    const auto rows = all_rows(data);
    return detail::build_tree(data, rows, weights, options, all_features());
}

}  // namespace fsoqos::learners
