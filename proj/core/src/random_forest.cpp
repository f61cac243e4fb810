#include "fsoqos/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "fsoqos/rng.hpp"

namespace fsoqos::learners {

std::size_t default_regression_mtry(std::size_t n_features) { return std::max<std::size_t>(1, (n_features + 2) / 3); }

std::size_t default_classification_mtry(std::size_t n_features) {
    auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_features))));
    return std::max<std::size_t>(1, m);
}

RandomForestModel::RandomForestModel(std::vector<RegressionTree> trees, ForestOptions options,
                                     std::optional<double> oob_error)
    : trees_(std::move(trees)), options_(options), oob_error_(oob_error) {
    if (trees_.empty()) throw std::domain_error("forest needs at least one tree");
    options_.n_trees = trees_.size();
}

double RandomForestModel::predict(std::span<const double> x) const {
    require_dimension(x, n_features());
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict(x);
    return sum / static_cast<double>(trees_.size());
}

double predict_random_forest(const RandomForestModel& model, std::span<const double> x) { return model.predict(x); }

namespace {

struct GrownTree {
    RegressionTree tree;
    std::vector<char> in_bag;
};

GrownTree grow_one(const LabeledTable& data, const ForestOptions& options, std::size_t index) {
    Rng rng(derive_seed(options.seed, index));
    const std::size_t m = data.rows();
    std::vector<std::size_t> rows(m);
    std::vector<char> in_bag(m, 0);
    if (options.bootstrap) {
        for (auto& r : rows) {
            r = rng.index(m);
            in_bag[r] = 1;
        }
    } else {
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        std::fill(in_bag.begin(), in_bag.end(), 1);
    }

    const std::size_t mtry = options.mtry;
    detail::FeatureSampler sampler = [&rng, mtry](std::size_t k) {
        std::vector<std::size_t> pool(k);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t i = 0; i < mtry; ++i) std::swap(pool[i], pool[i + rng.index(k - i)]);
        pool.resize(mtry);
        return pool;
    };
    TreeOptions tree_options{options.min_leaf_size, options.max_depth};
    return {detail::build_tree(data, rows, {}, tree_options, sampler), std::move(in_bag)};
}

}  // namespace

RandomForestModel fit_random_forest(const LabeledTable& data, ForestOptions options) {
    if (data.empty()) throw std::domain_error("cannot fit a forest on an empty table");
    if (options.n_trees == 0) throw std::domain_error("n_trees must be positive");
    if (options.mtry == 0) options.mtry = default_regression_mtry(data.cols());
    if (options.mtry > data.cols()) throw std::domain_error("mtry exceeds the feature count");

    std::vector<GrownTree> grown(options.n_trees);
    std::size_t workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, options.n_trees);
    if (workers <= 1) {
        for (std::size_t t = 0; t < options.n_trees; ++t) grown[t] = grow_one(data, options, t);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < options.n_trees; t += workers) grown[t] = grow_one(data, options, t);
            });
        }
        for (auto& th : pool) th.join();
    }

    std::optional<double> oob;
    if (options.bootstrap) {
        double sse = 0.0;
        std::size_t counted = 0;
        for (std::size_t i = 0; i < data.rows(); ++i) {
            double sum = 0.0;
            std::size_t votes = 0;
            for (const auto& g : grown) {
                if (g.in_bag[i]) continue;
                sum += g.tree.predict(data.row(i));
                ++votes;
            }
            if (votes == 0) continue;
            const double d = sum / static_cast<double>(votes) - data.target(i);
            sse += d * d;
            ++counted;
        }
        if (counted > 0) oob = sse / static_cast<double>(counted);
    }

    std::vector<RegressionTree> trees;
    trees.reserve(grown.size());
    for (auto& g : grown) trees.push_back(std::move(g.tree));
    return RandomForestModel(std::move(trees), options, oob);
}

}  // namespace fsoqos::learners
