#include "fsoqos/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fsoqos/error.hpp"

namespace fsoqos::learners {

namespace {

constexpr double kMinError = 1e-10;
constexpr double kErrorTolerance = 1e-12;

}  // namespace

AdaBoostModel AdaBoostModel::classifier(std::vector<Stump> stumps, std::vector<double> alphas,
                                        std::vector<double> errors, std::size_t n_features) {
    if (stumps.size() != alphas.size() || errors.size() != alphas.size()) {
        throw std::domain_error("learner, weight and error counts differ");
    }
    for (const auto& s : stumps) {
        if (s.feature >= n_features) throw std::domain_error("stump feature out of range");
    }
    AdaBoostModel m;
    m.mode_ = AdaBoostMode::BinaryClassifier;
    m.stumps_ = std::move(stumps);
    m.alphas_ = std::move(alphas);
    m.errors_ = std::move(errors);
    m.n_features_ = n_features;
    return m;
}

AdaBoostModel AdaBoostModel::regressor(std::vector<RegressionTree> trees, std::vector<double> alphas,
                                       std::vector<double> errors, std::size_t n_features, TreeOptions weak_options) {
    if (trees.size() != alphas.size() || errors.size() != alphas.size()) {
        throw std::domain_error("learner, weight and error counts differ");
    }
    if (trees.empty()) throw std::domain_error("regressor needs at least one learner");
    AdaBoostModel m;
    m.mode_ = AdaBoostMode::R2Regressor;
    m.trees_ = std::move(trees);
    m.alphas_ = std::move(alphas);
    m.errors_ = std::move(errors);
    m.n_features_ = n_features;
    m.weak_options_ = weak_options;
    return m;
}

double AdaBoostModel::decision_function(std::span<const double> x) const {
    require_dimension(x, n_features_);
    if (mode_ != AdaBoostMode::BinaryClassifier) throw std::logic_error("decision_function needs a classifier");
    double vote = 0.0;
    for (std::size_t k = 0; k < stumps_.size(); ++k) vote += alphas_[k] * stumps_[k].classify(x);
    return vote;
}

double AdaBoostModel::predict(std::span<const double> x) const {
    require_dimension(x, n_features_);
    if (mode_ == AdaBoostMode::BinaryClassifier) return decision_function(x) >= 0.0 ? 1.0 : -1.0;
    std::vector<double> predictions(trees_.size());
    for (std::size_t k = 0; k < trees_.size(); ++k) predictions[k] = trees_[k].predict(x);
    return weighted_median(predictions, alphas_);
}

double predict_adaboost(const AdaBoostModel& model, std::span<const double> x) { return model.predict(x); }

double weighted_median(std::span<const double> values, std::span<const double> weights) {
    if (values.empty() || values.size() != weights.size()) throw std::domain_error("weighted median needs matched, nonempty inputs");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double cumulative = 0.0;
    for (std::size_t i : order) {
        cumulative += weights[i];
        if (cumulative >= 0.5 * total) return values[i];
    }
    return values[order.back()];
}

double adaboost_alpha(double weighted_error) {
    if (!(weighted_error > 0.0 && weighted_error < 1.0)) throw std::domain_error("weighted error must lie in (0, 1)");
    return 0.5 * std::log((1.0 - weighted_error) / weighted_error);
}

namespace {

struct StumpChoice {
    Stump stump;
    double error = 0.5;  // error of the positive-polarity stump
    bool found = false;
};

// Search over positive-polarity stumps for the one whose error is furthest
// from 0.5; ties go to the lowest feature, then the lowest threshold.
StumpChoice best_stump(const LabeledTable& data, std::span<const double> weights) {
    StumpChoice best;
    double best_margin = -1.0;
    std::vector<std::size_t> order(data.rows());
    for (std::size_t f = 0; f < data.cols(); ++f) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return data.at(a, f) < data.at(b, f); });
        // Stump predicts +1 on the left. Start with everything on the right (all -1).
        double error = 0.0;
        for (std::size_t j = 0; j < data.rows(); ++j) {
            if (data.target(j) > 0.0) error += weights[j];
        }
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const std::size_t j = order[i];
            error += data.target(j) > 0.0 ? -weights[j] : weights[j];
            const double here = data.at(j, f);
            const double next = data.at(order[i + 1], f);
            if (here == next) continue;
            const double margin = std::abs(0.5 - error);
            if (margin > best_margin + kErrorTolerance) {
                best_margin = margin;
                const double mid = here + (next - here) / 2.0;
                best.stump = {f, mid < next ? mid : here, 1};
                best.error = error;
                best.found = true;
            }
        }
    }
    return best;
}

}  // namespace

AdaBoostModel fit_adaboost_classifier(const LabeledTable& data, std::size_t n_rounds,
                                      std::vector<AdaBoostRound>* trace) {
    const std::size_t m = data.rows();
    if (m < 2) throw std::domain_error("AdaBoost needs at least two rows");
    if (n_rounds == 0) throw std::domain_error("n_rounds must be positive");
    bool has_pos = false;
    bool has_neg = false;
    for (double y : data.targets()) {
        if (y == 1.0) {
            has_pos = true;
        } else if (y == -1.0) {
            has_neg = true;
        } else {
            throw std::domain_error("classifier targets must be -1 or +1");
        }
    }
    if (!has_pos || !has_neg) throw std::domain_error("classifier needs both classes present");

    std::vector<double> weights(m, 1.0 / static_cast<double>(m));
    std::vector<Stump> stumps;
    std::vector<double> alphas;
    std::vector<double> errors;
    for (std::size_t round = 0; round < n_rounds; ++round) {
        StumpChoice choice = best_stump(data, weights);
        if (!choice.found) break;
        double error = choice.error;
        bool flipped = false;
        if (error > 0.5) {
            choice.stump.polarity = -choice.stump.polarity;
            error = 1.0 - error;
            flipped = true;
        }
        error = std::max(error, 0.0);
        if (error >= 0.5 - kErrorTolerance) break;

        const double alpha = adaboost_alpha(std::max(error, kMinError));
        double z = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            weights[j] *= std::exp(-alpha * data.target(j) * choice.stump.classify(data.row(j)));
            z += weights[j];
        }
        for (auto& w : weights) w /= z;

        stumps.push_back(choice.stump);
        alphas.push_back(alpha);
        errors.push_back(error);
        if (trace) trace->push_back({choice.stump, error, alpha, flipped, weights});
        if (error <= kErrorTolerance) break;
    }
    if (stumps.empty()) throw TrainingError("no weak learner beat chance in the first round");
    return AdaBoostModel::classifier(std::move(stumps), std::move(alphas), std::move(errors), data.cols());
}

AdaBoostModel fit_adaboost_r2(const LabeledTable& data, const AdaBoostR2Options& options) {
    const std::size_t m = data.rows();
    if (m < 2) throw std::domain_error("AdaBoost.R2 needs at least two rows");
    if (options.n_rounds == 0) throw std::domain_error("n_rounds must be positive");

    const TreeOptions weak{options.min_leaf_size, options.max_depth};
    std::vector<double> weights(m, 1.0 / static_cast<double>(m));
    std::vector<RegressionTree> trees;
    std::vector<double> alphas;
    std::vector<double> losses;
    std::vector<double> abs_error(m);

    for (std::size_t round = 0; round < options.n_rounds; ++round) {
        auto tree = fit_regression_tree_weighted(data, weights, weak);
        double max_error = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            abs_error[j] = std::abs(tree.predict(data.row(j)) - data.target(j));
            max_error = std::max(max_error, abs_error[j]);
        }
        if (max_error == 0.0) {
            trees.push_back(std::move(tree));
            alphas.push_back(trees.size() == 1 ? 1.0 : std::log(1.0 / kMinError));
            losses.push_back(0.0);
            break;
        }
        double avg_loss = 0.0;
        for (std::size_t j = 0; j < m; ++j) avg_loss += weights[j] * abs_error[j] / max_error;
        if (avg_loss >= 0.5) {
            if (round == 0) {
                throw TrainingError("AdaBoost.R2: first-round average loss " + std::to_string(avg_loss) +
                                    " is not below 0.5");
            }
            break;
        }
        const double beta = std::max(avg_loss / (1.0 - avg_loss), kMinError);
        double z = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            weights[j] *= std::pow(beta, 1.0 - abs_error[j] / max_error);
            z += weights[j];
        }
        for (auto& w : weights) w /= z;
        trees.push_back(std::move(tree));
        alphas.push_back(std::log(1.0 / beta));
        losses.push_back(avg_loss);
    }
    return AdaBoostModel::regressor(std::move(trees), std::move(alphas), std::move(losses), data.cols(), weak);
}

}  // namespace fsoqos::learners
