#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fsoqos/adaboost.hpp"
#include "fsoqos/error.hpp"
#include "fsoqos/rng.hpp"

using fsoqos::LabeledTable;
using namespace fsoqos::learners;

namespace {

LabeledTable four_points() { return LabeledTable({"x"}, {1, 2, 3, 4}, {1, -1, 1, 1}); }

LabeledTable random_labels(std::uint64_t seed, std::size_t m) {
    fsoqos::Rng rng(seed);
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = rng.uniform();
        const double b = rng.uniform();
        x.insert(x.end(), {a, b});
        const bool positive = (a - 0.5) * (a - 0.5) + (b - 0.5) * (b - 0.5) < 0.12;
        y.push_back(rng.uniform() < 0.1 ? (positive ? -1.0 : 1.0) : (positive ? 1.0 : -1.0));
    }
    y[0] = 1.0;
    y[1] = -1.0;
    return LabeledTable({"a", "b"}, x, y);
}

}  // namespace

TEST(AdaBoostClassifier, FirstRoundMatchesHandComputation) {
    std::vector<AdaBoostRound> trace;
    fit_adaboost_classifier(four_points(), 1, &trace);
    ASSERT_EQ(trace.size(), 1u);
    const auto& r = trace.front();
    // Best raw stump: x <= 2.5 -> +1 errs on rows 2,3,4 (0.75); flipped it errs only on row 1.
    EXPECT_EQ(r.stump.feature, 0u);
    EXPECT_EQ(r.stump.threshold, 2.5);
    EXPECT_EQ(r.stump.polarity, -1);
    EXPECT_TRUE(r.flipped);
    EXPECT_NEAR(r.error, 0.25, 1e-15);
    EXPECT_NEAR(r.alpha, 0.5 * std::log(3.0), 1e-15);
    ASSERT_EQ(r.weights_after.size(), 4u);
    EXPECT_NEAR(r.weights_after[0], 0.5, 1e-15);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(r.weights_after[i], 1.0 / 6.0, 1e-15);
}

TEST(AdaBoostClassifier, WeightsSumToOneAndErrorsBelowHalf) {
    std::vector<AdaBoostRound> trace;
    const auto model = fit_adaboost_classifier(random_labels(4, 60), 30, &trace);
    ASSERT_FALSE(trace.empty());
    for (const auto& r : trace) {
        const double sum = std::accumulate(r.weights_after.begin(), r.weights_after.end(), 0.0);
        EXPECT_NEAR(sum, 1.0, 1e-12);
        EXPECT_LT(r.error, 0.5);
        EXPECT_GT(r.alpha, 0.0);
    }
    for (double e : model.errors()) EXPECT_LT(e, 0.5);
}

TEST(AdaBoostClassifier, SeparableDataStopsWithPerfectLearner) {
    const LabeledTable t({"x"}, {1, 2, 3, 4}, {1, 1, -1, -1});
    const auto model = fit_adaboost_classifier(t, 10);
    EXPECT_EQ(model.size(), 1u);
    EXPECT_NEAR(model.alphas()[0], adaboost_alpha(1e-10), 1e-12);
    for (std::size_t i = 0; i < t.rows(); ++i) EXPECT_EQ(model.predict(t.row(i)), t.target(i));
}

TEST(AdaBoostClassifier, TrainingErrorImproves) {
    const auto t = random_labels(9, 80);
    auto errors = [&](const AdaBoostModel& m) {
        int wrong = 0;
        for (std::size_t i = 0; i < t.rows(); ++i) wrong += m.predict(t.row(i)) != t.target(i);
        return wrong;
    };
    EXPECT_LE(errors(fit_adaboost_classifier(t, 40)), errors(fit_adaboost_classifier(t, 1)));
}

TEST(AdaBoostClassifier, RejectsBadLabels) {
    EXPECT_THROW(fit_adaboost_classifier(LabeledTable({"x"}, {1, 2}, {1, 0}), 3), std::domain_error);
    EXPECT_THROW(fit_adaboost_classifier(LabeledTable({"x"}, {1, 2}, {1, 1}), 3), std::domain_error);
}

TEST(AdaBoostAlpha, Formula) {
    EXPECT_NEAR(adaboost_alpha(0.25), 0.5 * std::log(3.0), 1e-15);
    EXPECT_EQ(adaboost_alpha(0.5), 0.0);
    EXPECT_THROW(adaboost_alpha(0.0), std::domain_error);
    EXPECT_THROW(adaboost_alpha(1.0), std::domain_error);
}

TEST(AdaBoostR2, PerfectlyFittableDataIsSingleRound) {
    const LabeledTable t({"x"}, {1, 2, 3, 4}, {0, 0, 5, 5});
    const auto model = fit_adaboost_r2(t, AdaBoostR2Options{20, 1, 3});
    EXPECT_EQ(model.size(), 1u);
    EXPECT_NEAR(model.errors()[0], 0.0, 1e-15);
    for (std::size_t i = 0; i < t.rows(); ++i) EXPECT_EQ(model.predict(t.row(i)), t.target(i));
}

TEST(AdaBoostR2, ConstantTargets) {
    const LabeledTable t({"x"}, {1, 2, 3}, {4, 4, 4});
    const auto model = fit_adaboost_r2(t);
    EXPECT_EQ(model.predict(std::vector<double>{10.0}), 4.0);
}

TEST(AdaBoostR2, BoostedMaeNotWorseThanFirstLearner) {
    fsoqos::Rng rng(12);
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 15; ++i) {
        x.push_back(i);
        y.push_back(0.8 * i + 1.0 + rng.normal());
    }
    const LabeledTable t({"x"}, x, y);
    const AdaBoostR2Options o{30, 1, 1};
    const auto model = fit_adaboost_r2(t, o);
    ASSERT_GE(model.size(), 1u);
    double boosted = 0.0;
    double first = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        boosted += std::abs(model.predict(t.row(i)) - t.target(i));
        first += std::abs(model.trees().front().predict(t.row(i)) - t.target(i));
    }
    EXPECT_LE(boosted, first);
    for (double e : model.errors()) EXPECT_LT(e, 0.5);
}

TEST(WeightedMedian, LowerWeightedMedian) {
    EXPECT_EQ(weighted_median(std::vector<double>{3, 1, 2}, std::vector<double>{1, 1, 1}), 2.0);
    EXPECT_EQ(weighted_median(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 5}), 3.0);
    EXPECT_EQ(weighted_median(std::vector<double>{1, 2}, std::vector<double>{1, 1}), 1.0);
    EXPECT_THROW(weighted_median(std::vector<double>{}, std::vector<double>{}), std::domain_error);
}
