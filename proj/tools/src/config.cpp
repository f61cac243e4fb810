#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "fsoqos/csv.hpp"

namespace fsoqos::cli {

namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& v) {
    double out = 0.0;
    if (!csv::parse_double(v, out) || !std::isfinite(out)) throw std::invalid_argument("not a finite number");
    return out;
}

double to_positive(const std::string& v) {
    const double d = to_double(v);
    if (!(d > 0.0)) throw std::invalid_argument("must be positive");
    return d;
}

std::size_t to_count(const std::string& v) {
    const double d = to_double(v);
    if (d < 0.0 || d != std::floor(d) || d > 1e12) throw std::invalid_argument("not a nonnegative integer");
    return static_cast<std::size_t>(d);
}

std::vector<double> to_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_positive(trim(item)));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

#define FSOQOS_KEY(name, expr) {name, [](RunConfig& c, const std::string& v) { expr; }}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        FSOQOS_KEY("seed", c.seed = static_cast<std::uint64_t>(to_count(v))),
        FSOQOS_KEY("attenuation_model", c.model = atmosphere::parse_attenuation_model(v)),
        FSOQOS_KEY("visibility_min_km", c.visibility_min_km = to_positive(v)),
        FSOQOS_KEY("visibility_max_km", c.visibility_max_km = to_positive(v)),
        FSOQOS_KEY("visibility_step_km", c.visibility_step_km = to_positive(v)),
        FSOQOS_KEY("wavelengths_nm", c.wavelengths_nm = to_list(v)),
        FSOQOS_KEY("range_min_km", c.range_min_km = to_positive(v)),
        FSOQOS_KEY("range_max_km", c.range_max_km = to_positive(v)),
        FSOQOS_KEY("range_step_km", c.range_step_km = to_positive(v)),
        FSOQOS_KEY("attenuation_min_db_per_km", c.attenuation_min_db_per_km = to_double(v)),
        FSOQOS_KEY("attenuation_max_db_per_km", c.attenuation_max_db_per_km = to_double(v)),
        FSOQOS_KEY("attenuation_step_db_per_km", c.attenuation_step_db_per_km = to_positive(v)),
        FSOQOS_KEY("tx_powers_w", c.tx_powers_w = to_list(v)),
        FSOQOS_KEY("link_range_km", c.link_range_km = to_positive(v)),
        FSOQOS_KEY("tx_power_w", c.transceiver.tx_power_w = to_positive(v)),
        FSOQOS_KEY("divergence_mrad", c.transceiver.divergence_mrad = to_positive(v)),
        FSOQOS_KEY("tx_efficiency", c.transceiver.tx_efficiency = to_positive(v)),
        FSOQOS_KEY("rx_efficiency", c.transceiver.rx_efficiency = to_positive(v)),
        FSOQOS_KEY("tx_aperture_m", c.transceiver.tx_aperture_m = to_double(v)),
        FSOQOS_KEY("rx_aperture_m", c.transceiver.rx_aperture_m = to_positive(v)),
        FSOQOS_KEY("wavelength_nm", c.transceiver.wavelength_nm = to_positive(v)),
        FSOQOS_KEY("rx_sensitivity_dbm", c.transceiver.rx_sensitivity_dbm = to_double(v)),
        FSOQOS_KEY("photons_per_bit", c.transceiver.photons_per_bit = to_positive(v)),
        FSOQOS_KEY("responsivity_a_per_w", c.noise.responsivity_a_per_w = to_positive(v)),
        FSOQOS_KEY("load_resistance_ohm", c.noise.load_resistance_ohm = to_positive(v)),
        FSOQOS_KEY("dark_current_a", c.noise.dark_current_a = to_double(v)),
        FSOQOS_KEY("temperature_k", c.noise.temperature_k = to_positive(v)),
        FSOQOS_KEY("electrical_bandwidth_hz", c.noise.electrical_bandwidth_hz = to_positive(v)),
        FSOQOS_KEY("budget_tx_gain", c.budget.tx_gain_linear = to_positive(v)),
        FSOQOS_KEY("budget_rx_gain", c.budget.rx_gain_linear = to_positive(v)),
        FSOQOS_KEY("budget_noise_bandwidth_hz", c.budget.noise_bandwidth_hz = to_positive(v)),
        FSOQOS_KEY("budget_temperature_k", c.budget.ambient_temp_k = to_positive(v)),
        FSOQOS_KEY("budget_noise_figure_db", c.budget.noise_figure_db = to_double(v)),
        FSOQOS_KEY("budget_fade_margin_db", c.budget.fade_margin_db = to_double(v)),
        FSOQOS_KEY("capacity_bandwidth_hz", c.capacity_bandwidth_hz = to_positive(v)),
        FSOQOS_KEY("capacity_snr_points", c.capacity_snr_points = to_list(v)),
        FSOQOS_KEY("target_ber", c.target_ber = to_positive(v)),
        FSOQOS_KEY("clear_visibility_km", c.clear_visibility_km = to_positive(v)),
        FSOQOS_KEY("fog_dense_km", c.fog_classes.at(0).visibility_km = to_positive(v)),
        FSOQOS_KEY("fog_thick_km", c.fog_classes.at(1).visibility_km = to_positive(v)),
        FSOQOS_KEY("fog_moderate_km", c.fog_classes.at(2).visibility_km = to_positive(v)),
        FSOQOS_KEY("fog_light_km", c.fog_classes.at(3).visibility_km = to_positive(v)),
        FSOQOS_KEY("n_days", c.n_days = to_count(v)),
        FSOQOS_KEY("data", c.data_path = v),
        FSOQOS_KEY("max_rows", c.max_rows = to_count(v)),
        FSOQOS_KEY("train_fraction", c.split_fractions[0] = to_positive(v)),
        FSOQOS_KEY("validation_fraction", c.split_fractions[1] = to_positive(v)),
        FSOQOS_KEY("test_fraction", c.split_fractions[2] = to_positive(v)),
        FSOQOS_KEY("rf_trees", c.rf_trees = to_count(v)),
        FSOQOS_KEY("rf_min_leaf", c.rf_min_leaf = to_count(v)),
        FSOQOS_KEY("gbr_trees", c.gbr_trees = to_count(v)),
        FSOQOS_KEY("gbr_learning_rate", c.gbr_learning_rate = to_positive(v)),
        FSOQOS_KEY("gbr_max_depth", c.gbr_max_depth = to_count(v)),
        FSOQOS_KEY("adbr_rounds", c.adbr_rounds = to_count(v)),
        FSOQOS_KEY("adbr_max_depth", c.adbr_max_depth = to_count(v)),
        FSOQOS_KEY("stack_folds", c.stack_folds = to_count(v)),
        FSOQOS_KEY("stack_rf_trees", c.stack_rf_trees = to_count(v)),
        FSOQOS_KEY("mlp_hidden", c.mlp_hidden = to_count(v)),
        FSOQOS_KEY("mlp_activation", c.mlp_activation = neural::parse_activation(v)),
        FSOQOS_KEY("mlp_epochs", c.mlp_epochs = to_count(v)),
        FSOQOS_KEY("mlp_learning_rate", c.mlp_learning_rate = to_double(v)),
        FSOQOS_KEY("mlp_batch", c.mlp_batch = to_count(v)),
        FSOQOS_KEY("mlp_patience", c.mlp_patience = to_count(v)),
    };
    return table;
}

#undef FSOQOS_KEY

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, _] : setters()) keys.push_back(k);
    return keys;
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
    std::vector<std::string> bad;
    std::string details;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bad.push_back("line " + std::to_string(line_no));
            details += "\n  line " + std::to_string(line_no) + ": expected key=value";
            continue;
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            bad.push_back(key);
            details += "\n  " + key + ": unknown key";
            continue;
        }
        try {
            it->second(cfg, value);
        } catch (const std::exception& e) {
            bad.push_back(key);
            details += "\n  " + key + ": " + e.what() + " ('" + value + "')";
        }
    }
    if (!bad.empty()) throw ValidationError(bad, "invalid configuration:" + details);
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError({"--config"}, "cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    apply_config_text(cfg, buffer.str());
}

void RunConfig::validate() const {
    std::vector<std::string> bad;
    std::string details;
    auto check = [&](bool ok, const std::string& key, const std::string& why) {
        if (!ok) {
            bad.push_back(key);
            details += "\n  " + key + ": " + why;
        }
    };
    check(visibility_min_km <= visibility_max_km, "visibility_max_km", "below visibility_min_km");
    check(range_min_km <= range_max_km, "range_max_km", "below range_min_km");
    check(attenuation_min_db_per_km >= 0.0, "attenuation_min_db_per_km", "must be nonnegative");
    check(attenuation_min_db_per_km <= attenuation_max_db_per_km, "attenuation_max_db_per_km",
          "below attenuation_min_db_per_km");
    check(tx_efficiency_ok(), "tx_efficiency", "efficiencies must lie in (0, 1]");
    check(transceiver.tx_aperture_m >= 0.0, "tx_aperture_m", "must be nonnegative");
    check(noise.dark_current_a >= 0.0, "dark_current_a", "must be nonnegative");
    check(target_ber < 0.5, "target_ber", "must be below 0.5");
    check(std::abs(split_fractions[0] + split_fractions[1] + split_fractions[2] - 1.0) <= 1e-9, "test_fraction",
          "train/validation/test fractions must sum to 1");
    check(rf_trees > 0, "rf_trees", "must be positive");
    check(rf_min_leaf > 0, "rf_min_leaf", "must be positive");
    check(gbr_trees > 0, "gbr_trees", "must be positive");
    check(adbr_rounds > 0, "adbr_rounds", "must be positive");
    check(stack_folds >= 2, "stack_folds", "must be at least 2");
    check(stack_rf_trees > 0, "stack_rf_trees", "must be positive");
    check(mlp_hidden > 0, "mlp_hidden", "must be positive");
    check(mlp_epochs > 0, "mlp_epochs", "must be positive");
    check(mlp_batch > 0, "mlp_batch", "must be positive");
    check(mlp_learning_rate >= 0.0, "mlp_learning_rate", "must be nonnegative");
    check(max_rows >= 20, "max_rows", "must be at least 20");
    check(n_days > 0, "n_days", "must be positive");
    if (!bad.empty()) throw ValidationError(bad, "invalid configuration:" + details);
}

bool RunConfig::tx_efficiency_ok() const {
    return transceiver.tx_efficiency <= 1.0 && transceiver.rx_efficiency <= 1.0;
}

std::vector<double> make_grid(double min, double max, double step) {
    if (!(step > 0.0) || !(max >= min)) throw std::domain_error("invalid grid");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-6));
    out.reserve(n + 1);
    // Computed from the index, not accumulated, so points do not drift.
    for (std::size_t i = 0; i <= n; ++i) out.push_back(min + static_cast<double>(i) * step);
    return out;
}

}  // namespace fsoqos::cli
