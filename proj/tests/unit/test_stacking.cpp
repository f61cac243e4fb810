#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fsoqos/error.hpp"
#include "fsoqos/rng.hpp"
#include "fsoqos/stacking.hpp"

using fsoqos::LabeledTable;
using namespace fsoqos::stacking;
namespace learners = fsoqos::learners;

namespace {

NamedTrainer constant_trainer(double v) {
    return {"const", [v](const LabeledTable&) { return Predictor([v](std::span<const double>) { return v; }); }};
}

NamedTrainer mean_trainer() {
    return {"mean", [](const LabeledTable& t) {
                const double m = std::accumulate(t.targets().begin(), t.targets().end(), 0.0) / static_cast<double>(t.rows());
                return Predictor([m](std::span<const double>) { return m; });
            }};
}

LabeledTable random_level1(std::uint64_t seed, std::size_t m, std::size_t L) {
    fsoqos::Rng rng(seed);
    std::vector<double> p;
    std::vector<double> y;
    std::vector<std::string> names;
    for (std::size_t l = 0; l < L; ++l) names.push_back("p" + std::to_string(l));
    for (std::size_t j = 0; j < m; ++j) {
        const double truth = rng.normal() * 3.0;
        y.push_back(truth);
        for (std::size_t l = 0; l < L; ++l) p.push_back(truth + rng.normal() * (0.5 + static_cast<double>(l)) + 0.3 * l);
    }
    return LabeledTable(names, p, y);
}

LabeledTable smooth_data(std::uint64_t seed, std::size_t m) {
    fsoqos::Rng rng(seed);
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = rng.uniform() * 3;
        const double b = rng.uniform() * 3;
        x.insert(x.end(), {a, b});
        y.push_back(a * a - b + 0.1 * rng.normal());
    }
    return LabeledTable({"a", "b"}, x, y);
}

}  // namespace

TEST(KFold, EqualSizesWhenDivisible) {
    const auto folds = kfold_partition(10, 5, 1);
    ASSERT_EQ(folds.size(), 5u);
    for (const auto& f : folds) EXPECT_EQ(f.size(), 2u);
}

TEST(KFold, RemainderSpread) {
    const auto folds = kfold_partition(10, 3, 1);
    EXPECT_EQ(folds[0].size(), 4u);
    EXPECT_EQ(folds[1].size(), 3u);
    EXPECT_EQ(folds[2].size(), 3u);
}

TEST(KFold, PartitionLawAndDeterminism) {
    for (std::size_t m : {2u, 7u, 31u, 100u}) {
        for (std::size_t h = 2; h <= std::min<std::size_t>(m, 9); ++h) {
            const auto folds = kfold_partition(m, h, 77);
            std::multiset<std::size_t> all;
            std::size_t lo = m;
            std::size_t hi = 0;
            for (const auto& f : folds) {
                all.insert(f.begin(), f.end());
                lo = std::min(lo, f.size());
                hi = std::max(hi, f.size());
            }
            EXPECT_EQ(all.size(), m);
            EXPECT_EQ(std::set<std::size_t>(all.begin(), all.end()).size(), m);
            EXPECT_LE(hi - lo, 1u);
            EXPECT_EQ(folds, kfold_partition(m, h, 77));
        }
    }
}

TEST(KFold, Errors) {
    EXPECT_THROW(kfold_partition(3, 4, 0), std::domain_error);
    EXPECT_THROW(kfold_partition(3, 1, 0), std::domain_error);
}

TEST(Level1, ConstantZeroLearnerGivesZeroColumn) {
    const auto data = smooth_data(1, 12);
    const std::vector<NamedTrainer> trainers{constant_trainer(0.0)};
    const auto level1 = build_level1_sample(data, trainers, kfold_partition(12, 3, 5));
    ASSERT_EQ(level1.rows(), 12u);
    ASSERT_EQ(level1.cols(), 1u);
    for (std::size_t j = 0; j < 12; ++j) EXPECT_EQ(level1.at(j, 0), 0.0);
    EXPECT_EQ(level1.targets(), data.targets());
}

TEST(Level1, MeanLearnerSeesOnlyOtherFold) {
    const LabeledTable data({"x"}, {0, 1, 2, 3, 4, 5}, {1, 2, 4, 8, 16, 32});
    const auto folds = kfold_partition(6, 2, 3);
    const std::vector<NamedTrainer> trainers{mean_trainer()};
    const auto level1 = build_level1_sample(data, trainers, folds);
    for (std::size_t h = 0; h < 2; ++h) {
        double outside = 0.0;
        for (std::size_t j : folds[1 - h]) outside += data.target(j);
        outside /= 3.0;
        for (std::size_t j : folds[h]) EXPECT_DOUBLE_EQ(level1.at(j, 0), outside);
    }
}

TEST(Level1, ShapeFromSpecs) {
    const auto data = smooth_data(2, 40);
    StackConfig cfg;
    cfg.base_learners = {learners::TreeSpec{}, learners::GradientBoostSpec{{10, 0.3, 1, 2}}};
    cfg.n_folds = 4;
    const auto level1 = build_level1_sample(data, cfg);
    EXPECT_EQ(level1.rows(), 40u);
    EXPECT_EQ(level1.cols(), 2u);
    EXPECT_EQ(level1.targets(), data.targets());
    EXPECT_EQ(level1.feature_names(), (std::vector<std::string>{"tree", "gbr"}));
}

TEST(Level1, ZeroingAFoldsTargetsLeavesThatFoldsRowsUnchanged) {
    const auto data = smooth_data(3, 30);
    const auto folds = kfold_partition(30, 5, 8);
    const std::vector<NamedTrainer> trainers{
        {"tree", [](const LabeledTable& t) {
             auto tree = std::make_shared<learners::RegressionTree>(learners::fit_regression_tree(t));
             return Predictor([tree](std::span<const double> x) { return tree->predict(x); });
         }},
        mean_trainer()};
    const auto base = build_level1_sample(data, trainers, folds);
    for (std::size_t h = 0; h < folds.size(); ++h) {
        auto y = data.targets();
        for (std::size_t j : folds[h]) y[j] = 0.0;
        const auto perturbed = build_level1_sample(data.with_targets(y), trainers, folds);
        for (std::size_t j : folds[h]) {
            for (std::size_t l = 0; l < 2; ++l) EXPECT_EQ(perturbed.at(j, l), base.at(j, l));
        }
    }
}

TEST(Level1, FailureNamesFoldAndLearner) {
    const auto data = smooth_data(4, 10);
    const std::vector<NamedTrainer> trainers{
        constant_trainer(1.0),
        {"broken", [](const LabeledTable&) -> Predictor { throw std::runtime_error("boom"); }}};
    try {
        build_level1_sample(data, trainers, kfold_partition(10, 2, 0));
        FAIL() << "expected a TrainingError";
    } catch (const fsoqos::TrainingError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("fold 0"), std::string::npos);
        EXPECT_NE(what.find("learner 1"), std::string::npos);
        EXPECT_NE(what.find("broken"), std::string::npos);
        EXPECT_NE(what.find("boom"), std::string::npos);
    }
}

TEST(SimplexProjection, Properties) {
    fsoqos::Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + rng.index(6));
        for (double& x : v) x = rng.normal() * 2;
        const auto p = project_to_simplex(v);
        EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
        for (double x : p) EXPECT_GE(x, 0.0);
        // Idempotent.
        const auto again = project_to_simplex(p);
        for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(again[i], p[i], 1e-12);
    }
    const auto e = project_to_simplex(std::vector<double>{0.2, 0.3, 0.5});
    EXPECT_NEAR(e[0], 0.2, 1e-15);
    EXPECT_NEAR(e[2], 0.5, 1e-15);
}

TEST(StackingWeights, SingleLearner) {
    const auto level1 = random_level1(1, 20, 1);
    const auto s = solve_stacking_weights(level1);
    ASSERT_EQ(s.weights.size(), 1u);
    EXPECT_EQ(s.weights[0], 1.0);
}

TEST(StackingWeights, IdenticalColumnsKeepSingleColumnObjective) {
    const auto base = random_level1(2, 25, 1);
    std::vector<double> dup;
    for (double v : base.features()) dup.insert(dup.end(), {v, v});
    const LabeledTable level1({"a", "b"}, dup, base.targets());
    const auto s = solve_stacking_weights(level1);
    EXPECT_NEAR(s.objective, stacking_objective(base, std::vector<double>{1.0}), 1e-9);
}

TEST(StackingWeights, ExactColumnGetsAllWeight) {
    const auto noisy = random_level1(3, 40, 3);
    std::vector<double> p = noisy.features();
    for (std::size_t j = 0; j < noisy.rows(); ++j) p[j * 3 + 1] = noisy.target(j);
    const LabeledTable level1(noisy.feature_names(), p, noisy.targets());
    const auto s = solve_stacking_weights(level1);
    EXPECT_NEAR(s.objective, 0.0, 1e-12);
    EXPECT_NEAR(s.weights[1], 1.0, 1e-6);
}

TEST(StackingWeights, FeasibleAndDominatesVertices) {
    for (std::uint64_t seed = 10; seed < 40; ++seed) {
        const auto level1 = random_level1(seed, 50, 2 + seed % 4);
        const auto s = solve_stacking_weights(level1);
        EXPECT_NEAR(std::accumulate(s.weights.begin(), s.weights.end(), 0.0), 1.0, 1e-9);
        for (double w : s.weights) EXPECT_GE(w, 0.0);
        for (std::size_t l = 0; l < level1.cols(); ++l) {
            std::vector<double> vertex(level1.cols(), 0.0);
            vertex[l] = 1.0;
            EXPECT_LE(s.objective, stacking_objective(level1, vertex));
        }
        EXPECT_NEAR(s.objective, stacking_objective(level1, s.weights), 1e-9 * std::max(1.0, s.objective));
    }
}

TEST(StackingWeights, InvariantToDuplicatingTheSample) {
    const auto level1 = random_level1(5, 30, 3);
    const auto doubled = level1.concat(level1);
    const auto a = solve_stacking_weights(level1);
    const auto b = solve_stacking_weights(doubled);
    for (std::size_t l = 0; l < 3; ++l) EXPECT_NEAR(a.weights[l], b.weights[l], 1e-6);
}

TEST(StackingWeights, RejectsNonFinite) {
    // the table refuses non-finite entries before the solver sees them
    EXPECT_THROW(solve_stacking_weights(LabeledTable({"a"}, {NAN, 1.0}, {1.0, 2.0})), std::domain_error);
}

TEST(StackedModel, OneHotAndConstantPredictions) {
    const auto data = smooth_data(6, 30);
    std::vector<learners::BaseModel> bases{learners::fit_regression_tree(data),
                                           learners::fit_gradient_boost(data, {5, 0.5, 1, 2})};
    const StackedModel one_hot(bases, {0.0, 1.0}, 5, 0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        EXPECT_EQ(one_hot.predict(data.row(i)), learners::predict(bases[1], data.row(i)));
    }
    const LabeledTable flat({"a", "b"}, {0, 0, 1, 1}, {2.5, 2.5});
    std::vector<learners::BaseModel> same{learners::fit_regression_tree(flat), learners::fit_regression_tree(flat)};
    const StackedModel constant(same, {0.3, 0.7}, 2, 0);
    EXPECT_EQ(constant.predict(std::vector<double>{9, 9}), 2.5);
}

TEST(StackedModel, PredictionsInsideBaseHull) {
    const auto data = smooth_data(7, 60);
    StackConfig cfg;
    cfg.base_learners = {learners::TreeSpec{}, learners::GradientBoostSpec{{20, 0.2, 1, 2}},
                         learners::ForestSpec{{15, 0, 1, 0, true, 0, 1}}};
    cfg.n_folds = 3;
    cfg.seed = 4;
    const auto model = fit_stacked(data, cfg);
    EXPECT_NEAR(std::accumulate(model.weights().begin(), model.weights().end(), 0.0), 1.0, 1e-9);
    fsoqos::Rng rng(3);
    for (int q = 0; q < 300; ++q) {
        const std::vector<double> x{rng.uniform() * 4 - 0.5, rng.uniform() * 4 - 0.5};
        const auto preds = model.base_predictions(x);
        const double p = model.predict(x);
        EXPECT_GE(p, *std::min_element(preds.begin(), preds.end()));
        EXPECT_LE(p, *std::max_element(preds.begin(), preds.end()));
    }
    EXPECT_THROW(model.predict(std::vector<double>{1.0}), std::domain_error);
}

TEST(StackedModel, ConstructorValidatesWeights) {
    const auto data = smooth_data(8, 10);
    std::vector<learners::BaseModel> bases{learners::fit_regression_tree(data), learners::fit_regression_tree(data)};
    EXPECT_THROW(StackedModel(bases, {0.5, 0.6}, 2, 0), std::domain_error);
    EXPECT_THROW(StackedModel(bases, {-0.1, 1.1}, 2, 0), std::domain_error);
    EXPECT_THROW(StackedModel(bases, {1.0}, 2, 0), std::domain_error);
}

TEST(StackConfig, Validation) {
    StackConfig cfg;
    EXPECT_THROW(cfg.validate(10), std::domain_error);
    cfg.base_learners = {learners::TreeSpec{}};
    cfg.n_folds = 1;
    EXPECT_THROW(cfg.validate(10), std::domain_error);
    cfg.n_folds = 11;
    EXPECT_THROW(cfg.validate(10), std::domain_error);
}
