#include "fsoqos/model.hpp"

#include <stdexcept>

namespace fsoqos::learners {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string_view learner_name(const LearnerSpec& spec) {
    return std::visit(Overloaded{
                          [](const TreeSpec&) { return std::string_view("tree"); },
                          [](const ForestSpec&) { return std::string_view("forest"); },
                          [](const GradientBoostSpec&) { return std::string_view("gbr"); },
                          [](const AdaBoostR2Spec&) { return std::string_view("adbr-r2"); },
                          [](const MlpSpec&) { return std::string_view("mlp"); },
                      },
                      spec);
}

std::string_view model_name(const BaseModel& model) {
    return std::visit(Overloaded{
                          [](const RegressionTree&) { return std::string_view("tree"); },
                          [](const RandomForestModel&) { return std::string_view("forest"); },
                          [](const GradientBoostModel&) { return std::string_view("gbr"); },
                          [](const AdaBoostModel&) { return std::string_view("adbr-r2"); },
                          [](const neural::MlpModel&) { return std::string_view("mlp"); },
                      },
                      model);
}

BaseModel fit_learner(const LearnerSpec& spec, const LabeledTable& data, std::uint64_t seed) {
    return std::visit(Overloaded{
                          [&](const TreeSpec& s) -> BaseModel { return fit_regression_tree(data, s.options); },
                          [&](const ForestSpec& s) -> BaseModel {
                              auto options = s.options;
                              options.seed = seed;
                              return fit_random_forest(data, options);
                          },
                          [&](const GradientBoostSpec& s) -> BaseModel { return fit_gradient_boost(data, s.options); },
                          [&](const AdaBoostR2Spec& s) -> BaseModel { return fit_adaboost_r2(data, s.options); },
                          [&](const MlpSpec& s) -> BaseModel {
                              std::vector<std::size_t> sizes{data.cols()};
                              sizes.insert(sizes.end(), s.hidden_layers.begin(), s.hidden_layers.end());
                              sizes.push_back(1);
                              auto cfg = s.train;
                              cfg.seed = seed;
                              auto init = neural::MlpModel::initialized(sizes, s.hidden, s.output, seed);
                              return neural::train(std::move(init), data, cfg).model;
                          },
                      },
                      spec);
}

double predict(const BaseModel& model, std::span<const double> x) {
    return std::visit(Overloaded{
                          [&](const RegressionTree& m) { return m.predict(x); },
                          [&](const RandomForestModel& m) { return m.predict(x); },
                          [&](const GradientBoostModel& m) { return m.predict(x); },
                          [&](const AdaBoostModel& m) { return m.predict(x); },
                          [&](const neural::MlpModel& m) { return m.forward(x); },
                      },
                      model);
}

std::size_t n_features(const BaseModel& model) {
    return std::visit([](const auto& m) { return m.n_features(); }, model);
}

}  // namespace fsoqos::learners
