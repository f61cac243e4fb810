#include "fsoqos/gradient_boost.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fsoqos::learners {

namespace {

void check_rate(double rate) {
    if (!(rate > 0.0 && rate < 1.0)) throw std::domain_error("learning_rate must lie strictly inside (0, 1)");
}

}  // namespace

GradientBoostModel::GradientBoostModel(double init_value, std::vector<RegressionTree> trees,
                                       GradientBoostOptions options, std::size_t n_features)
    : init_value_(init_value), trees_(std::move(trees)), options_(options), n_features_(n_features) {
    check_rate(options_.learning_rate);
    for (const auto& t : trees_) {
        if (t.n_features() != n_features_) throw std::domain_error("stage tree feature count mismatch");
    }
    options_.n_trees = trees_.size();
}

double GradientBoostModel::predict_staged(std::span<const double> x, std::size_t stages) const {
    require_dimension(x, n_features_);
    if (stages > trees_.size()) throw std::domain_error("requested more stages than the model holds");
    double f = init_value_;
    for (std::size_t i = 0; i < stages; ++i) f += options_.learning_rate * trees_[i].predict(x);
    return f;
}

double GradientBoostModel::predict(std::span<const double> x) const { return predict_staged(x, trees_.size()); }

double predict_gradient_boost(const GradientBoostModel& model, std::span<const double> x) { return model.predict(x); }

GradientBoostModel fit_gradient_boost(const LabeledTable& data, const GradientBoostOptions& options) {
    check_rate(options.learning_rate);
    if (data.empty()) throw std::domain_error("cannot fit gradient boosting on an empty table");

    const auto& y = data.targets();
    const double init = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    std::vector<double> current(y.size(), init);
    std::vector<double> residuals(y.size());
    std::vector<RegressionTree> trees;
    trees.reserve(options.n_trees);
    const TreeOptions tree_options{options.min_leaf_size, options.max_depth};

    for (std::size_t stage = 0; stage < options.n_trees; ++stage) {
        // Negative gradient of 0.5 (y - F)^2.
        for (std::size_t j = 0; j < y.size(); ++j) residuals[j] = y[j] - current[j];
        auto tree = fit_regression_tree(data.with_targets(residuals), tree_options);
        for (std::size_t j = 0; j < y.size(); ++j) current[j] += options.learning_rate * tree.predict(data.row(j));
        trees.push_back(std::move(tree));
    }
    return GradientBoostModel(init, std::move(trees), options, data.cols());
}

}  // namespace fsoqos::learners
