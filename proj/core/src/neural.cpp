#include "fsoqos/neural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fsoqos/dataset.hpp"
#include "fsoqos/error.hpp"
#include "fsoqos/rng.hpp"

namespace fsoqos::neural {

double activation(ActivationKind kind, double t) {
    switch (kind) {
        case ActivationKind::Tanh: return std::tanh(t);
        case ActivationKind::Sigmoid: return 1.0 / (1.0 + std::exp(-t));
        case ActivationKind::Relu: return t > 0.0 ? t : 0.0;
        case ActivationKind::Gaussian: return std::exp(-t * t);
        case ActivationKind::Direct: return t;
    }
    throw std::invalid_argument("unknown activation");
}

double activation_derivative(ActivationKind kind, double t) {
    switch (kind) {
        case ActivationKind::Tanh: {
            const double th = std::tanh(t);
            return 1.0 - th * th;
        }
        case ActivationKind::Sigmoid: {
            const double s = 1.0 / (1.0 + std::exp(-t));
            return s * (1.0 - s);
        }
        case ActivationKind::Relu: return t > 0.0 ? 1.0 : 0.0;
        case ActivationKind::Gaussian: return -2.0 * t * std::exp(-t * t);
        case ActivationKind::Direct: return 1.0;
    }
    throw std::invalid_argument("unknown activation");
}

std::string_view to_string(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::Tanh: return "tanh";
        case ActivationKind::Sigmoid: return "sigmoid";
        case ActivationKind::Relu: return "relu";
        case ActivationKind::Gaussian: return "gaussian";
        case ActivationKind::Direct: return "direct";
    }
    return "unknown";
}

ActivationKind parse_activation(std::string_view name) {
    for (auto kind : {ActivationKind::Tanh, ActivationKind::Sigmoid, ActivationKind::Relu, ActivationKind::Gaussian,
                      ActivationKind::Direct}) {
        if (to_string(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

MlpModel::MlpModel(std::vector<std::size_t> layer_sizes, ActivationKind hidden, ActivationKind output)
    : layer_sizes_(std::move(layer_sizes)), hidden_(hidden), output_(output) {
    if (layer_sizes_.size() < 2) throw std::domain_error("network needs an input and an output layer");
    if (layer_sizes_.back() != 1) throw std::domain_error("network must have a single output");
    for (std::size_t s : layer_sizes_) {
        if (s == 0) throw std::domain_error("layer sizes must be positive");
    }
    for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
        DenseLayer layer;
        layer.inputs = layer_sizes_[l];
        layer.outputs = layer_sizes_[l + 1];
        layer.weights.assign(layer.inputs * layer.outputs, 0.0);
        layer.biases.assign(layer.outputs, 0.0);
        layers_.push_back(std::move(layer));
    }
    scaling_.input_mean.assign(n_features(), 0.0);
    scaling_.input_scale.assign(n_features(), 1.0);
}

MlpModel MlpModel::initialized(std::vector<std::size_t> layer_sizes, ActivationKind hidden, ActivationKind output,
                               std::uint64_t seed) {
    MlpModel model(std::move(layer_sizes), hidden, output);
    Rng rng(seed);
    for (auto& layer : model.layers_) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.inputs));
        for (auto& w : layer.weights) w = (2.0 * rng.uniform() - 1.0) * bound;
        for (auto& b : layer.biases) b = (2.0 * rng.uniform() - 1.0) * bound;
    }
    return model;
}

void MlpModel::set_scaling(Scaling scaling) {
    if (scaling.input_mean.size() != n_features() || scaling.input_scale.size() != n_features()) {
        throw std::domain_error("scaling size does not match the input layer");
    }
    for (double s : scaling.input_scale) {
        if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("input scales must be positive");
    }
    if (!(scaling.target_scale > 0.0) || !std::isfinite(scaling.target_offset)) {
        throw std::domain_error("target scaling must be positive and finite");
    }
    scaling_ = std::move(scaling);
}

std::vector<double> MlpModel::scale_inputs(std::span<const double> x) const {
    require_dimension(x, n_features());
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - scaling_.input_mean[i]) / scaling_.input_scale[i];
    return out;
}

double MlpModel::network_output(std::span<const double> scaled_x) const {
    require_dimension(scaled_x, n_features());
    std::vector<double> current(scaled_x.begin(), scaled_x.end());
    std::vector<double> next;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& layer = layers_[l];
        const ActivationKind kind = l + 1 == layers_.size() ? output_ : hidden_;
        next.assign(layer.outputs, 0.0);
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            double z = layer.biases[o];
            for (std::size_t i = 0; i < layer.inputs; ++i) z += layer.weights[o * layer.inputs + i] * current[i];
            next[o] = activation(kind, z);
        }
        current.swap(next);
    }
    return current.front();
}

double MlpModel::forward(std::span<const double> x) const {
    return scaling_.target_offset + scaling_.target_scale * network_output(scale_inputs(x));
}

std::size_t MlpModel::parameter_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers_) n += layer.weights.size() + layer.biases.size();
    return n;
}

std::vector<double> MlpModel::parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto& layer : layers_) {
        out.insert(out.end(), layer.weights.begin(), layer.weights.end());
        out.insert(out.end(), layer.biases.begin(), layer.biases.end());
    }
    return out;
}

void MlpModel::set_parameters(std::span<const double> params) {
    if (params.size() != parameter_count()) throw std::domain_error("parameter vector has the wrong length");
    std::size_t k = 0;
    for (auto& layer : layers_) {
        for (auto& w : layer.weights) w = params[k++];
        for (auto& b : layer.biases) b = params[k++];
    }
}

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw std::domain_error("learning_rate must be nonnegative");
    if (epochs == 0) throw std::domain_error("epochs must be positive");
    if (batch_size == 0) throw std::domain_error("batch_size must be positive");
    double sum = 0.0;
    for (double f : split_fractions) {
        if (!(f > 0.0)) throw std::domain_error("split fractions must be positive");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("split fractions must sum to 1");
}

namespace {

double scaled_target(const MlpModel& model, double y) {
    return (y - model.scaling().target_offset) / model.scaling().target_scale;
}

// Accumulates d(sum of squared errors)/d(params) for one sample into `grad`,
// returns the squared error.
double accumulate_sample(const MlpModel& model, std::span<const double> scaled_x, double target,
                         std::vector<double>& grad, std::vector<std::vector<double>>& pre,
                         std::vector<std::vector<double>>& post) {
    const auto& layers = model.layers();
    const std::size_t n_layers = layers.size();
    post.resize(n_layers + 1);
    pre.resize(n_layers);
    post[0].assign(scaled_x.begin(), scaled_x.end());
    for (std::size_t l = 0; l < n_layers; ++l) {
        const auto& layer = layers[l];
        const ActivationKind kind = l + 1 == n_layers ? model.output_activation() : model.hidden_activation();
        pre[l].assign(layer.outputs, 0.0);
        post[l + 1].assign(layer.outputs, 0.0);
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            double z = layer.biases[o];
            for (std::size_t i = 0; i < layer.inputs; ++i) z += layer.weights[o * layer.inputs + i] * post[l][i];
            pre[l][o] = z;
            post[l + 1][o] = activation(kind, z);
        }
    }
    const double err = post[n_layers][0] - target;

    // Parameter offsets per layer in the flat vector.
    std::vector<std::size_t> offset(n_layers);
    std::size_t k = 0;
    for (std::size_t l = 0; l < n_layers; ++l) {
        offset[l] = k;
        k += layers[l].weights.size() + layers[l].biases.size();
    }

    std::vector<double> delta{2.0 * err};
    for (std::size_t l = n_layers; l-- > 0;) {
        const auto& layer = layers[l];
        const ActivationKind kind = l + 1 == n_layers ? model.output_activation() : model.hidden_activation();
        for (std::size_t o = 0; o < layer.outputs; ++o) delta[o] *= activation_derivative(kind, pre[l][o]);
        const std::size_t w0 = offset[l];
        const std::size_t b0 = w0 + layer.weights.size();
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            for (std::size_t i = 0; i < layer.inputs; ++i) grad[w0 + o * layer.inputs + i] += delta[o] * post[l][i];
            grad[b0 + o] += delta[o];
        }
        if (l == 0) break;
        std::vector<double> previous(layer.inputs, 0.0);
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            for (std::size_t i = 0; i < layer.inputs; ++i) previous[i] += layer.weights[o * layer.inputs + i] * delta[o];
        }
        delta.swap(previous);
    }
    return err * err;
}

std::vector<std::vector<double>> scaled_rows(const MlpModel& model, const LabeledTable& data) {
    std::vector<std::vector<double>> rows(data.rows());
    for (std::size_t j = 0; j < data.rows(); ++j) rows[j] = model.scale_inputs(data.row(j));
    return rows;
}

double loss_on(const MlpModel& model, const std::vector<std::vector<double>>& rows, const LabeledTable& data) {
    if (rows.empty()) return 0.0;
    double sse = 0.0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const double d = model.network_output(rows[j]) - scaled_target(model, data.target(j));
        sse += d * d;
    }
    return sse / static_cast<double>(rows.size());
}

Scaling fit_scaling(const LabeledTable& data, const TrainConfig& cfg) {
    const std::size_t k = data.cols();
    const auto m = static_cast<double>(data.rows());
    Scaling s;
    s.input_mean.assign(k, 0.0);
    s.input_scale.assign(k, 1.0);
    if (cfg.standardize_inputs) {
        for (std::size_t f = 0; f < k; ++f) {
            double mean = 0.0;
            for (std::size_t j = 0; j < data.rows(); ++j) mean += data.at(j, f);
            mean /= m;
            double var = 0.0;
            for (std::size_t j = 0; j < data.rows(); ++j) var += (data.at(j, f) - mean) * (data.at(j, f) - mean);
            const double sd = std::sqrt(var / m);
            s.input_mean[f] = mean;
            s.input_scale[f] = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
        }
    }
    if (cfg.standardize_targets) {
        const auto& y = data.targets();
        const double mean = std::accumulate(y.begin(), y.end(), 0.0) / m;
        double var = 0.0;
        for (double v : y) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / m);
        s.target_offset = mean;
        s.target_scale = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
    }
    return s;
}

}  // namespace

double training_loss(const MlpModel& model, const LabeledTable& data) {
    return loss_on(model, scaled_rows(model, data), data);
}

std::vector<double> loss_gradient(const MlpModel& model, const LabeledTable& data) {
    if (data.empty()) throw std::domain_error("gradient needs at least one row");
    std::vector<double> grad(model.parameter_count(), 0.0);
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> post;
    for (std::size_t j = 0; j < data.rows(); ++j) {
        accumulate_sample(model, model.scale_inputs(data.row(j)), scaled_target(model, data.target(j)), grad, pre, post);
    }
    for (auto& g : grad) g /= static_cast<double>(data.rows());
    return grad;
}

double gradient_check(const MlpModel& model, const LabeledTable& data, double epsilon) {
    if (!(epsilon > 1e-8 && epsilon < 1e-3)) throw std::domain_error("epsilon must lie in (1e-8, 1e-3)");
    const auto analytic = loss_gradient(model, data);
    auto params = model.parameters();
    MlpModel probe = model;
    double worst = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        const double saved = params[p];
        params[p] = saved + epsilon;
        probe.set_parameters(params);
        const double up = training_loss(probe, data);
        params[p] = saved - epsilon;
        probe.set_parameters(params);
        const double down = training_loss(probe, data);
        params[p] = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        const double denom = std::max({std::abs(analytic[p]), std::abs(numeric), 1e-6});
        worst = std::max(worst, std::abs(analytic[p] - numeric) / denom);
    }
    return worst;
}

TrainResult train(MlpModel model, const LabeledTable& train_data, const LabeledTable* validation,
                  const TrainConfig& cfg) {
    cfg.validate();
    if (train_data.empty()) throw std::domain_error("training table is empty");
    require_dimension(train_data.row(0), model.n_features());

    model.set_scaling(fit_scaling(train_data, cfg));
    const auto rows = scaled_rows(model, train_data);
    std::vector<double> targets(train_data.rows());
    for (std::size_t j = 0; j < targets.size(); ++j) targets[j] = scaled_target(model, train_data.target(j));
    std::vector<std::vector<double>> val_rows;
    if (validation != nullptr && !validation->empty()) val_rows = scaled_rows(model, *validation);

    TrainResult result{model, {}};
    auto params = model.parameters();
    auto best_params = params;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> grad(params.size());
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> post;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t b = start; b < stop; ++b) {
                accumulate_sample(model, rows[order[b]], targets[order[b]], grad, pre, post);
            }
            const double step = cfg.learning_rate / static_cast<double>(stop - start);
            for (std::size_t p = 0; p < params.size(); ++p) params[p] -= step * grad[p];
            model.set_parameters(params);
        }

        double train_loss = 0.0;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            const double d = model.network_output(rows[j]) - targets[j];
            train_loss += d * d;
        }
        train_loss /= static_cast<double>(rows.size());
        if (!std::isfinite(train_loss)) {
            throw TrainingError("MLP training diverged at epoch " + std::to_string(epoch + 1));
        }
        result.history.train_loss.push_back(train_loss);

        if (!val_rows.empty()) {
            const double val_loss = loss_on(model, val_rows, *validation);
            result.history.validation_loss.push_back(val_loss);
            if (val_loss < best_val) {
                best_val = val_loss;
                best_params = params;
                result.history.best_epoch = epoch;
                since_best = 0;
            } else if (cfg.early_stop_patience != 0 && ++since_best >= cfg.early_stop_patience) {
                break;
            }
        } else {
            result.history.best_epoch = epoch;
        }
    }

    if (!val_rows.empty()) model.set_parameters(best_params);
    result.model = std::move(model);
    return result;
}

TrainResult train(MlpModel model, const LabeledTable& data, const TrainConfig& cfg) {
    cfg.validate();
    const auto parts = dataset::split_dataset(data, cfg.split_fractions, cfg.seed);
    return train(std::move(model), parts.train, &parts.validation, cfg);
}

}  // namespace fsoqos::neural
