#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fsoqos/table.hpp"
#include "fsoqos/tree.hpp"

namespace fsoqos::learners {

enum class AdaBoostMode { BinaryClassifier, R2Regressor };

/// Depth-1 threshold classifier: x[feature] <= threshold -> polarity, else -polarity.
struct Stump {
    std::size_t feature = 0;
    double threshold = 0.0;
    int polarity = 1;

    int classify(std::span<const double> x) const { return x[feature] <= threshold ? polarity : -polarity; }
};

/// Per-round bookkeeping of a classifier fit.
struct AdaBoostRound {
    Stump stump;
    double error = 0.0;
    double alpha = 0.0;
    bool flipped = false;
    /// Sample distribution after this round's update (sums to 1).
    std::vector<double> weights_after;
};

class AdaBoostModel {
public:
    AdaBoostModel() = default;
    static AdaBoostModel classifier(std::vector<Stump> stumps, std::vector<double> alphas, std::vector<double> errors,
                                    std::size_t n_features);
    static AdaBoostModel regressor(std::vector<RegressionTree> trees, std::vector<double> alphas,
                                   std::vector<double> errors, std::size_t n_features, TreeOptions weak_options);

    /// Classifier: sign of the weighted vote, with a zero vote mapped to +1.
    /// Regressor: weighted median of the member predictions.
    double predict(std::span<const double> x) const;
    /// Raw weighted vote sum_k alpha_k h_k(x) (classifier only).
    double decision_function(std::span<const double> x) const;

    AdaBoostMode mode() const noexcept { return mode_; }
    const std::vector<Stump>& stumps() const noexcept { return stumps_; }
    const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
    const std::vector<double>& alphas() const noexcept { return alphas_; }
    /// Weighted error (classifier) or average linear loss (regressor) per round.
    const std::vector<double>& errors() const noexcept { return errors_; }
    std::size_t n_features() const noexcept { return n_features_; }
    std::size_t size() const noexcept { return alphas_.size(); }
    const TreeOptions& weak_options() const noexcept { return weak_options_; }

private:
    AdaBoostMode mode_ = AdaBoostMode::BinaryClassifier;
    std::vector<Stump> stumps_;
    std::vector<RegressionTree> trees_;
    std::vector<double> alphas_;
    std::vector<double> errors_;
    std::size_t n_features_ = 0;
    TreeOptions weak_options_;
};

/// alpha = 0.5 ln((1 - eps) / eps).
double adaboost_alpha(double weighted_error);

/// Discrete AdaBoost over threshold stumps. Each round picks the stump whose
/// weighted error is furthest from 0.5, flipping its polarity when the error
/// exceeds 0.5. Stops early when the error reaches 0 (the learner is kept with
/// alpha computed at eps = 1e-10) or exactly 0.5 (the learner is dropped).
/// Targets must be exactly -1 or +1 with both classes present.
AdaBoostModel fit_adaboost_classifier(const LabeledTable& data, std::size_t n_rounds,
                                      std::vector<AdaBoostRound>* trace = nullptr);

struct AdaBoostR2Options {
    std::size_t n_rounds = 50;
    std::size_t min_leaf_size = 1;
    /// Weak-learner depth cap; 0 means unbounded.
    std::size_t max_depth = 3;
};

/// AdaBoost.R2 with linear loss. Weak learners are weighted regression trees;
/// training stops when the average loss reaches 0.5 (a TrainingError in the
/// first round) or the weak learner fits every row exactly.
AdaBoostModel fit_adaboost_r2(const LabeledTable& data, const AdaBoostR2Options& options = {});

double predict_adaboost(const AdaBoostModel& model, std::span<const double> x);

/// Smallest value whose cumulative weight reaches half the total.
double weighted_median(std::span<const double> values, std::span<const double> weights);

}  // namespace fsoqos::learners
