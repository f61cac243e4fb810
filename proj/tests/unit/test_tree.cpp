#include <gtest/gtest.h>

#include <random>

#include "brute_force_tree.hpp"
#include "fsoqos/rng.hpp"
#include "fsoqos/tree.hpp"

using fsoqos::LabeledTable;
using namespace fsoqos::learners;

namespace {

struct Instance {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    LabeledTable table;
};

Instance random_instance(std::uint64_t seed, std::size_t m, std::size_t k) {
    fsoqos::Rng rng(seed);
    Instance inst;
    std::vector<double> flat;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < k; ++j) names.push_back("x" + std::to_string(j));
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> row;
        for (std::size_t j = 0; j < k; ++j) {
            // Coarse grid so duplicate feature values and tied partitions occur.
            row.push_back(static_cast<double>(rng.index(6)));
        }
        flat.insert(flat.end(), row.begin(), row.end());
        inst.x.push_back(row);
        inst.y.push_back(rng.normal());
    }
    inst.table = LabeledTable(names, flat, inst.y);
    return inst;
}

}  // namespace

TEST(RegressionTree, MatchesExhaustiveOracle) {
    std::size_t checked = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        fsoqos::Rng pick(1000 + s);
        const std::size_t m = 2 + pick.index(11);
        const std::size_t k = 1 + pick.index(2);
        const std::size_t min_leaf = 1 + pick.index(3);
        const auto inst = random_instance(s, m, k);
        const auto tree = fit_regression_tree(inst.table, TreeOptions{min_leaf, 0});
        const auto oracle_tree = oracle::brute_tree(inst.x, inst.y, min_leaf);
        EXPECT_EQ(tree.leaf_count(), oracle::brute_leaves(*oracle_tree)) << "instance " << s;
        for (double a = -0.5; a <= 5.5; a += 0.5) {
            for (double b = -0.5; b <= 5.5; b += 0.5) {
                std::vector<double> q{a, b};
                q.resize(k);
                EXPECT_NEAR(tree.predict(q), oracle::brute_predict(*oracle_tree, q), 1e-12) << "instance " << s;
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 0u);
}

TEST(RegressionTree, MemorizesDistinctTrainingRows) {
    const auto inst = random_instance(7, 40, 2);
    std::vector<double> flat;
    std::vector<double> y;
    for (std::size_t i = 0; i < 40; ++i) {
        flat.push_back(static_cast<double>(i) * 0.37);
        flat.push_back(static_cast<double>((i * 7) % 40));
        y.push_back(inst.y[i]);
    }
    const LabeledTable t({"a", "b"}, flat, y);
    const auto tree = fit_regression_tree(t);
    for (std::size_t i = 0; i < t.rows(); ++i) EXPECT_EQ(tree.predict(t.row(i)), t.target(i));
}

TEST(RegressionTree, ConstantTargetIsSingleLeaf) {
    const LabeledTable t({"a"}, {1, 2, 3, 4}, {5, 5, 5, 5});
    const auto tree = fit_regression_tree(t);
    EXPECT_EQ(tree.leaf_count(), 1u);
    EXPECT_EQ(tree.predict(std::vector<double>{100.0}), 5.0);
}

TEST(RegressionTree, StepFunctionSplitsAtMidpoint) {
    const LabeledTable t({"a"}, {1, 2, 3, 4}, {0, 0, 1, 1});
    const auto tree = fit_regression_tree(t);
    ASSERT_EQ(tree.nodes().front().feature, 0);
    EXPECT_EQ(tree.nodes().front().threshold, 2.5);
    EXPECT_EQ(tree.leaf_count(), 2u);
}

TEST(RegressionTree, MinLeafSizeRespected) {
    const auto inst = random_instance(3, 30, 2);
    const auto tree = fit_regression_tree(inst.table, TreeOptions{5, 0});
    std::vector<std::size_t> counts(tree.nodes().size(), 0);
    for (std::size_t i = 0; i < inst.table.rows(); ++i) {
        std::size_t n = 0;
        while (!tree.nodes()[n].is_leaf()) {
            const auto& node = tree.nodes()[n];
            n = static_cast<std::size_t>(inst.table.at(i, static_cast<std::size_t>(node.feature)) <= node.threshold
                                             ? node.left
                                             : node.right);
        }
        ++counts[n];
    }
    for (std::size_t n = 0; n < counts.size(); ++n) {
        if (tree.nodes()[n].is_leaf()) {
            EXPECT_GE(counts[n], 5u);
        }
    }
}

TEST(RegressionTree, DepthCap) {
    const auto inst = random_instance(11, 50, 2);
    for (std::size_t d : {1u, 2u, 3u}) {
        const auto tree = fit_regression_tree(inst.table, TreeOptions{1, d});
        EXPECT_LE(tree.depth(), d);
        const auto oracle_tree = oracle::brute_tree(inst.x, inst.y, 1, d);
        for (const auto& row : inst.x) EXPECT_NEAR(tree.predict(row), oracle::brute_predict(*oracle_tree, row), 1e-12);
    }
}

TEST(RegressionTree, Errors) {
    const LabeledTable t({"a"}, {1, 2}, {0, 1});
    EXPECT_THROW(fit_regression_tree(t, TreeOptions{0, 0}), std::domain_error);
    EXPECT_THROW(fit_regression_tree(LabeledTable({"a"}, {}, {})), std::domain_error);
    const auto tree = fit_regression_tree(t);
    EXPECT_THROW(tree.predict(std::vector<double>{1.0, 2.0}), std::domain_error);
}

TEST(RegressionTree, WeightedFitUsesWeightedMeans) {
    const LabeledTable t({"a"}, {1, 1, 1}, {0, 3, 6});
    const std::vector<double> w{1, 1, 2};
    const auto tree = fit_regression_tree_weighted(t, w, TreeOptions{});
    EXPECT_DOUBLE_EQ(tree.predict(std::vector<double>{1.0}), (0 + 3 + 12) / 4.0);
}
