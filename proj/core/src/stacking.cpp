#include "fsoqos/stacking.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "fsoqos/error.hpp"
#include "fsoqos/rng.hpp"

namespace fsoqos::stacking {

namespace {

constexpr std::size_t kMaxIterations = 10000;
constexpr double kRelativeTolerance = 1e-12;

// Fold h, learner l stream for the cross-validated fits; stream 0 of each
// learner is reserved for the final refit on all rows.
std::uint64_t fit_seed(std::uint64_t seed, std::size_t learner, std::size_t fold_plus_one) {
    return derive_seed(derive_seed(seed, learner), fold_plus_one);
}

}  // namespace

void StackConfig::validate(std::size_t rows) const {
    if (base_learners.empty()) throw std::domain_error("stack needs at least one base learner");
    if (n_folds < 2) throw std::domain_error("stack needs at least 2 folds");
    if (n_folds > rows) throw std::domain_error("more folds than rows");
}

std::vector<std::vector<std::size_t>> kfold_partition(std::size_t m, std::size_t n_folds, std::uint64_t seed) {
    if (n_folds < 2) throw std::domain_error("kfold_partition: need at least 2 folds");
    if (n_folds > m) throw std::domain_error("kfold_partition: more folds than rows");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<std::vector<std::size_t>> folds(n_folds);
    const std::size_t base = m / n_folds;
    const std::size_t extra = m % n_folds;
    std::size_t cursor = 0;
    for (std::size_t h = 0; h < n_folds; ++h) {
        const std::size_t size = base + (h < extra ? 1 : 0);
        folds[h].assign(order.begin() + static_cast<long>(cursor), order.begin() + static_cast<long>(cursor + size));
        std::sort(folds[h].begin(), folds[h].end());
        cursor += size;
    }
    return folds;
}

LabeledTable build_level1_sample(const LabeledTable& data, std::span<const NamedTrainer> trainers,
                                 const std::vector<std::vector<std::size_t>>& folds) {
    if (trainers.empty()) throw std::domain_error("build_level1_sample: no base learners");
    const std::size_t m = data.rows();
    const std::size_t L = trainers.size();

    std::vector<int> seen(m, 0);
    for (const auto& fold : folds) {
        for (std::size_t j : fold) {
            if (j >= m) throw std::domain_error("build_level1_sample: fold index out of range");
            ++seen[j];
        }
    }
    if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
        throw std::domain_error("build_level1_sample: folds must partition the rows");
    }

    std::vector<double> level1(m * L, 0.0);
    for (std::size_t h = 0; h < folds.size(); ++h) {
        std::vector<std::size_t> train_rows;
        train_rows.reserve(m - folds[h].size());
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g != h) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
        }
        std::sort(train_rows.begin(), train_rows.end());
        const LabeledTable train = data.subset(train_rows);
        for (std::size_t l = 0; l < L; ++l) {
            try {
                const Predictor predictor = trainers[l].fit(train);
                for (std::size_t j : folds[h]) {
                    const double p = predictor(data.row(j));
                    if (!std::isfinite(p)) throw TrainingError("non-finite prediction");
                    level1[j * L + l] = p;
                }
            } catch (const std::exception& e) {
                throw TrainingError("fold " + std::to_string(h) + ", learner " + std::to_string(l) + " (" +
                                    trainers[l].name + "): " + e.what());
            }
        }
    }

    std::vector<std::string> names;
    names.reserve(L);
    for (std::size_t l = 0; l < L; ++l) names.push_back(trainers[l].name);
    return LabeledTable(std::move(names), std::move(level1), data.targets(), data.groups());
}

LabeledTable build_level1_sample(const LabeledTable& data, const StackConfig& cfg) {
    cfg.validate(data.rows());
    const auto folds = kfold_partition(data.rows(), cfg.n_folds, cfg.seed);
    std::vector<NamedTrainer> trainers;
    for (std::size_t l = 0; l < cfg.base_learners.size(); ++l) {
        const auto& spec = cfg.base_learners[l];
        // Each call to fit receives the next fold; the counter keeps per-fold seeds distinct.
        auto fold_counter = std::make_shared<std::size_t>(0);
        trainers.push_back({std::string(learners::learner_name(spec)), [&spec, l, fold_counter, &cfg](const LabeledTable& t) {
                                const auto seed = fit_seed(cfg.seed, l, ++*fold_counter);
                                auto model = std::make_shared<learners::BaseModel>(learners::fit_learner(spec, t, seed));
                                return Predictor([model](std::span<const double> x) { return learners::predict(*model, x); });
                            }});
    }
    return build_level1_sample(data, trainers, folds);
}

double stacking_objective(const LabeledTable& level1, std::span<const double> weights) {
    require_dimension(weights, level1.cols());
    double total = 0.0;
    for (std::size_t j = 0; j < level1.rows(); ++j) {
        const auto row = level1.row(j);
        double fit = 0.0;
        for (std::size_t l = 0; l < row.size(); ++l) fit += weights[l] * row[l];
        const double r = level1.target(j) - fit;
        total += r * r;
    }
    return total;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
    if (v.empty()) throw std::domain_error("project_to_simplex: empty vector");
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        cumulative += sorted[j];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
    return out;
}

WeightSolution solve_stacking_weights(const LabeledTable& level1) {
    if (level1.empty() || level1.cols() == 0) throw std::domain_error("solve_stacking_weights: empty level-1 sample");
    for (double v : level1.features()) {
        if (!std::isfinite(v)) throw std::domain_error("solve_stacking_weights: non-finite level-1 entry");
    }
    for (double v : level1.targets()) {
        if (!std::isfinite(v)) throw std::domain_error("solve_stacking_weights: non-finite target");
    }
    const std::size_t L = level1.cols();
    const std::size_t m = level1.rows();

    // Gram matrix G = P^T P and b = P^T y; gradient of the objective is 2(G u - b).
    std::vector<double> gram(L * L, 0.0);
    std::vector<double> b(L, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const auto row = level1.row(j);
        for (std::size_t a = 0; a < L; ++a) {
            b[a] += row[a] * level1.target(j);
            for (std::size_t c = 0; c < L; ++c) gram[a * L + c] += row[a] * row[c];
        }
    }

    WeightSolution best;
    best.weights.assign(L, 0.0);
    best.objective = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < L; ++l) {
        std::vector<double> vertex(L, 0.0);
        vertex[l] = 1.0;
        const double f = stacking_objective(level1, vertex);
        if (f < best.objective) {
            best.objective = f;
            best.weights = vertex;
        }
    }
    if (L == 1) return best;

    // Largest eigenvalue of G by power iteration, padded so the step stays below 1/Lipschitz.
    std::vector<double> v(L, 1.0 / std::sqrt(static_cast<double>(L)));
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        std::vector<double> w(L, 0.0);
        for (std::size_t a = 0; a < L; ++a) {
            for (std::size_t c = 0; c < L; ++c) w[a] += gram[a * L + c] * v[c];
        }
        const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        if (norm == 0.0) break;
        lambda = norm;
        for (std::size_t a = 0; a < L; ++a) v[a] = w[a] / norm;
    }
    double trace = 0.0;
    for (std::size_t a = 0; a < L; ++a) trace += gram[a * L + a];
    const double lipschitz = 2.0 * std::min(1.05 * lambda, trace);
    if (!(lipschitz > 0.0)) return best;
    const double step = 1.0 / lipschitz;

    std::vector<double> u = best.weights;
    double f = best.objective;
    std::size_t it = 0;
    while (it < kMaxIterations) {
        ++it;
        std::vector<double> next(L);
        for (std::size_t a = 0; a < L; ++a) {
            double g = -b[a];
            for (std::size_t c = 0; c < L; ++c) g += gram[a * L + c] * u[c];
            next[a] = u[a] - step * 2.0 * g;
        }
        next = project_to_simplex(next);
        const double f_next = stacking_objective(level1, next);
        const double change = std::abs(f - f_next);
        if (f_next <= f) {
            u = std::move(next);
            f = f_next;
        }
        if (change <= kRelativeTolerance * std::max(1.0, f)) break;
    }
    best.weights = std::move(u);
    best.objective = f;
    best.iterations = it;
    return best;
}

StackedModel::StackedModel(std::vector<learners::BaseModel> base_models, std::vector<double> weights,
                           std::size_t n_folds, std::uint64_t seed)
    : base_models_(std::move(base_models)), weights_(std::move(weights)), n_folds_(n_folds), seed_(seed) {
    if (base_models_.empty()) throw std::domain_error("StackedModel: no base models");
    if (weights_.size() != base_models_.size()) throw std::domain_error("StackedModel: one weight per base model");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::domain_error("StackedModel: weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("StackedModel: weights must sum to 1");
    n_features_ = learners::n_features(base_models_.front());
    for (const auto& m : base_models_) {
        if (learners::n_features(m) != n_features_) throw std::domain_error("StackedModel: feature count mismatch");
    }
}

std::vector<double> StackedModel::base_predictions(std::span<const double> x) const {
    require_dimension(x, n_features_);
    std::vector<double> out;
    out.reserve(base_models_.size());
    for (const auto& m : base_models_) out.push_back(learners::predict(m, x));
    return out;
}

double StackedModel::predict(std::span<const double> x) const {
    const auto preds = base_predictions(x);
    double total = 0.0;
    for (std::size_t l = 0; l < preds.size(); ++l) total += weights_[l] * preds[l];
    // Keep the result inside the hull even when rounding nudges it out.
    const auto [lo, hi] = std::minmax_element(preds.begin(), preds.end());
    return std::clamp(total, *lo, *hi);
}

StackedModel fit_stacked(const LabeledTable& data, const StackConfig& cfg) {
    const LabeledTable level1 = build_level1_sample(data, cfg);
    auto solution = solve_stacking_weights(level1);
    std::vector<learners::BaseModel> finals;
    finals.reserve(cfg.base_learners.size());
    for (std::size_t l = 0; l < cfg.base_learners.size(); ++l) {
        try {
            finals.push_back(learners::fit_learner(cfg.base_learners[l], data, fit_seed(cfg.seed, l, 0)));
        } catch (const std::exception& e) {
            throw TrainingError("final refit, learner " + std::to_string(l) + " (" +
                                std::string(learners::learner_name(cfg.base_learners[l])) + "): " + e.what());
        }
    }
    return StackedModel(std::move(finals), std::move(solution.weights), cfg.n_folds, cfg.seed);
}

double predict_stacked(const StackedModel& model, std::span<const double> x) { return model.predict(x); }

}  // namespace fsoqos::stacking
