#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsoqos/atmosphere.hpp"
#include "fsoqos/link_budget.hpp"
#include "fsoqos/neural.hpp"

namespace fsoqos::cli {

/// Raised for bad configuration values; `keys` lists every offending key.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::vector<std::string> keys, const std::string& what)
        : std::runtime_error(what), keys_(std::move(keys)) {}
    const std::vector<std::string>& keys() const noexcept { return keys_; }

private:
    std::vector<std::string> keys_;
};

struct FogClass {
    std::string name;
    double visibility_km = 0.0;
};

struct RunConfig {
    std::uint64_t seed = 42;
    std::filesystem::path out_dir = ".";
    std::vector<std::string> stations;  // empty: all presets / all stations in the data

    atmosphere::AttenuationModel model = atmosphere::AttenuationModel::Kim;
    double visibility_min_km = 0.5;
    double visibility_max_km = 10.0;
    double visibility_step_km = 0.25;
    std::vector<double> wavelengths_nm{760, 860, 960, 1260, 1550};
    double range_min_km = 0.1;
    double range_max_km = 10.0;
    double range_step_km = 0.1;
    double attenuation_min_db_per_km = 0.0;
    double attenuation_max_db_per_km = 30.0;
    double attenuation_step_db_per_km = 0.5;
    std::vector<double> tx_powers_w{0.005, 0.025, 0.05, 0.075, 0.1};
    double link_range_km = 1.0;

    link::TransceiverConfig transceiver;
    link::ReceiverNoiseConfig noise;
    link::RfBudgetInputs budget;
    double capacity_bandwidth_hz = 1e9;
    std::vector<double> capacity_snr_points{1, 2, 5, 10, 25.07, 50, 100, 1000};

    double target_ber = 1e-9;
    double clear_visibility_km = 23.0;
    std::vector<FogClass> fog_classes{{"dense", 0.05}, {"thick", 0.2}, {"moderate", 0.5}, {"light", 0.77}};

    std::size_t n_days = 3650;
    std::filesystem::path data_path;  // visibility CSV; empty: synthesize

    std::size_t max_rows = 5000;
    std::array<double, 3> split_fractions{0.70, 0.15, 0.15};
    std::size_t rf_trees = 100;
    std::size_t rf_min_leaf = 1;
    std::size_t gbr_trees = 100;
    double gbr_learning_rate = 0.1;
    std::size_t gbr_max_depth = 4;
    std::size_t adbr_rounds = 50;
    std::size_t adbr_max_depth = 3;
    std::size_t stack_folds = 5;
    std::size_t stack_rf_trees = 50;
    std::size_t mlp_hidden = 10;
    neural::ActivationKind mlp_activation = neural::ActivationKind::Sigmoid;
    std::size_t mlp_epochs = 500;
    double mlp_learning_rate = 0.05;
    std::size_t mlp_batch = 32;
    std::size_t mlp_patience = 50;

    /// Cross-field checks; throws ValidationError.
    void validate() const;
    bool tx_efficiency_ok() const;
};

/// Flat key=value text; '#' starts a comment. Unknown keys and bad values are
/// collected and reported together.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);
std::vector<std::string> config_keys();

/// Inclusive arithmetic grid; the last point is max when it lands within step/1e6.
std::vector<double> make_grid(double min, double max, double step);

}  // namespace fsoqos::cli
