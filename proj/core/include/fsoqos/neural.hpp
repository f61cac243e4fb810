#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fsoqos/table.hpp"

namespace fsoqos::neural {

enum class ActivationKind { Tanh, Sigmoid, Relu, Gaussian, Direct };

double activation(ActivationKind kind, double t);
double activation_derivative(ActivationKind kind, double t);
std::string_view to_string(ActivationKind kind);
/// Accepts tanh, sigmoid, relu, gaussian, direct.
ActivationKind parse_activation(std::string_view name);

/// Fully connected layer; weights are outputs x inputs, row-major.
struct DenseLayer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;
    std::vector<double> biases;
};

/// Per-feature z-score applied before the first layer, and the affine map
/// applied to the network output (y = offset + scale * net).
struct Scaling {
    std::vector<double> input_mean;
    std::vector<double> input_scale;
    double target_offset = 0.0;
    double target_scale = 1.0;
};

class MlpModel {
public:
    MlpModel() = default;
    /// All parameters zero, identity scaling. `layer_sizes` = {inputs, hidden..., 1}.
    MlpModel(std::vector<std::size_t> layer_sizes, ActivationKind hidden, ActivationKind output = ActivationKind::Direct);

    /// Parameters uniform in +-1/sqrt(fan_in).
    static MlpModel initialized(std::vector<std::size_t> layer_sizes, ActivationKind hidden, ActivationKind output,
                                std::uint64_t seed);

    /// Prediction in target units (scaling applied on both sides).
    double forward(std::span<const double> x) const;
    /// Raw network output on already-scaled inputs.
    double network_output(std::span<const double> scaled_x) const;
    std::vector<double> scale_inputs(std::span<const double> x) const;

    const std::vector<std::size_t>& layer_sizes() const noexcept { return layer_sizes_; }
    std::size_t n_features() const noexcept { return layer_sizes_.empty() ? 0 : layer_sizes_.front(); }
    ActivationKind hidden_activation() const noexcept { return hidden_; }
    ActivationKind output_activation() const noexcept { return output_; }
    const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
    std::vector<DenseLayer>& layers() noexcept { return layers_; }
    const Scaling& scaling() const noexcept { return scaling_; }
    void set_scaling(Scaling scaling);

    std::size_t parameter_count() const;
    /// Flattened as layer by layer: weights (row-major) then biases.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> params);

private:
    std::vector<std::size_t> layer_sizes_;
    ActivationKind hidden_ = ActivationKind::Sigmoid;
    ActivationKind output_ = ActivationKind::Direct;
    std::vector<DenseLayer> layers_;
    Scaling scaling_;
};

struct TrainConfig {
    double learning_rate = 0.05;
    std::size_t epochs = 500;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    /// (train, validation, test) used by the splitting overload of train().
    std::array<double, 3> split_fractions{0.70, 0.15, 0.15};
    /// Epochs without validation improvement before stopping; 0 disables.
    std::size_t early_stop_patience = 50;
    bool standardize_inputs = true;
    bool standardize_targets = true;

    void validate() const;
};

struct TrainHistory {
    std::vector<double> train_loss;
    std::vector<double> validation_loss;
    std::size_t best_epoch = 0;
};

struct TrainResult {
    MlpModel model;
    TrainHistory history;
};

/// Mini-batch gradient descent on mean squared error. Scaling is fitted on
/// `train_data` only. With a validation table the parameters of the best
/// validation epoch are returned and training stops after `patience` epochs
/// without improvement. Throws TrainingError on a non-finite loss.
TrainResult train(MlpModel model, const LabeledTable& train_data, const LabeledTable* validation,
                  const TrainConfig& cfg);

/// Splits `data` by cfg.split_fractions and trains on the first part while
/// monitoring the second; the test part is not touched.
TrainResult train(MlpModel model, const LabeledTable& data, const TrainConfig& cfg);

/// Mean squared error in the network's (scaled) output space.
double training_loss(const MlpModel& model, const LabeledTable& data);

/// Analytic gradient of training_loss, in parameters() order.
std::vector<double> loss_gradient(const MlpModel& model, const LabeledTable& data);

/// Max over parameters of |analytic - central difference| / max(|analytic|, |numeric|, 1e-6).
double gradient_check(const MlpModel& model, const LabeledTable& data, double epsilon);

}  // namespace fsoqos::neural
