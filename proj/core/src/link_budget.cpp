#include "fsoqos/link_budget.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fsoqos::link {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::domain_error(message);
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }
bool nonnegative(double v) { return v >= 0.0 && std::isfinite(v); }

double divergence_rad(const TransceiverConfig& cfg) { return cfg.divergence_mrad * 1e-3; }

double channel_loss_factor(double atten_db_per_km, double range_km) {
    return std::pow(10.0, -atten_db_per_km * range_km / 10.0);
}

}  // namespace

void TransceiverConfig::validate() const {
    require(positive(tx_power_w), "tx_power_w must be positive");
    require(positive(divergence_mrad), "divergence_mrad must be positive");
    require(tx_efficiency > 0.0 && tx_efficiency <= 1.0, "tx_efficiency must lie in (0, 1]");
    require(rx_efficiency > 0.0 && rx_efficiency <= 1.0, "rx_efficiency must lie in (0, 1]");
    require(positive(tx_aperture_m), "tx_aperture_m must be positive");
    require(positive(rx_aperture_m), "rx_aperture_m must be positive");
    require(positive(wavelength_nm), "wavelength_nm must be positive");
    require(std::isfinite(rx_sensitivity_dbm), "rx_sensitivity_dbm must be finite");
    require(positive(photons_per_bit), "photons_per_bit must be positive");
}

void ReceiverNoiseConfig::validate() const {
    require(positive(responsivity_a_per_w), "responsivity_a_per_w must be positive");
    require(positive(load_resistance_ohm), "load_resistance_ohm must be positive");
    require(nonnegative(dark_current_a), "dark_current_a must be nonnegative");
    require(positive(temperature_k), "temperature_k must be positive");
    require(positive(electrical_bandwidth_hz), "electrical_bandwidth_hz must be positive");
    require(positive(boltzmann_j_per_k), "boltzmann_j_per_k must be positive");
    require(positive(planck_js), "planck_js must be positive");
}

void RfBudgetInputs::validate() const {
    require(std::isfinite(tx_power_dbm), "tx_power_dbm must be finite");
    require(positive(tx_gain_linear), "tx_gain_linear must be positive");
    require(positive(rx_gain_linear), "rx_gain_linear must be positive");
    require(positive(wavelength_m), "wavelength_m must be positive");
    require(positive(noise_bandwidth_hz), "noise_bandwidth_hz must be positive");
    require(positive(ambient_temp_k), "ambient_temp_k must be positive");
    require(positive(boltzmann_j_per_k), "boltzmann_j_per_k must be positive");
    require(nonnegative(total_attenuation_db), "total_attenuation_db must be nonnegative");
    require(nonnegative(noise_figure_db), "noise_figure_db must be nonnegative");
    require(nonnegative(fade_margin_db), "fade_margin_db must be nonnegative");
}

std::string_view to_string(OokScheme scheme) { return scheme == OokScheme::NrzOok ? "nrz" : "rz"; }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }
double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double photon_energy(double wavelength_nm, const ReceiverNoiseConfig& noise) {
    require(positive(wavelength_nm), "wavelength must be positive");
    return noise.planck_js * kSpeedOfLight / (wavelength_nm * 1e-9);
}

double geometric_path_gain(const TransceiverConfig& cfg, double atten_db_per_km, double range_km) {
    cfg.validate();
    require(nonnegative(atten_db_per_km), "attenuation must be nonnegative");
    require(nonnegative(range_km), "range must be nonnegative");
    const double footprint_m = cfg.tx_aperture_m + divergence_rad(cfg) * range_km * 1e3;
    const double spread = (cfg.rx_aperture_m * cfg.rx_aperture_m) / (footprint_m * footprint_m);
    return spread * channel_loss_factor(atten_db_per_km, range_km);
}

double received_power_geometric(const TransceiverConfig& cfg, double atten_db_per_km, double range_km) {
    return cfg.tx_power_w * geometric_path_gain(cfg, atten_db_per_km, range_km);
}

double received_power_aperture(const TransceiverConfig& cfg, double atten_db_per_km, double range_km) {
    cfg.validate();
    require(nonnegative(atten_db_per_km), "attenuation must be nonnegative");
    require(positive(range_km), "aperture form is singular at zero range");
    const double theta = divergence_rad(cfg);
    const double range_m = range_km * 1e3;
    const double efficiency = cfg.tx_efficiency * cfg.rx_efficiency;
    const double uncapped = cfg.tx_power_w * (cfg.rx_aperture_m * cfg.rx_aperture_m) /
                            (theta * theta * range_m * range_m) *
                            channel_loss_factor(atten_db_per_km, range_km) * efficiency;
    return std::min(uncapped, cfg.tx_power_w * efficiency);
}

double achievable_data_rate(double p_received_w, double wavelength_nm, double photons_per_bit,
                            const ReceiverNoiseConfig& noise) {
    require(nonnegative(p_received_w), "received power must be nonnegative");
    require(positive(photons_per_bit), "photons per bit must be positive");
    return 4.0 * p_received_w / (std::numbers::pi * photon_energy(wavelength_nm, noise) * photons_per_bit);
}

double achievable_data_rate_direct(const TransceiverConfig& cfg, double atten_db_per_km, double range_km,
                                   const ReceiverNoiseConfig& noise) {
    cfg.validate();
    require(positive(range_km), "range must be positive");
    const double half_theta = divergence_rad(cfg) / 2.0;
    const double range_m = range_km * 1e3;
    const double numerator = cfg.tx_power_w * cfg.tx_efficiency * cfg.rx_efficiency *
                             channel_loss_factor(atten_db_per_km, range_km) * cfg.rx_aperture_m *
                             cfg.rx_aperture_m;
    const double denominator = std::numbers::pi * half_theta * half_theta * range_m * range_m *
                               photon_energy(cfg.wavelength_nm, noise) * cfg.photons_per_bit;
    return numerator / denominator;
}

double snr_budget_db(const RfBudgetInputs& in) {
    in.validate();
    return in.tx_power_dbm - 30.0 - 10.0 * std::log10(in.tx_gain_linear) + 10.0 * std::log10(in.rx_gain_linear) -
           20.0 * std::log10(4.0 * std::numbers::pi / in.wavelength_m) -
           10.0 * std::log10(in.noise_bandwidth_hz * in.ambient_temp_k * in.boltzmann_j_per_k) -
           in.total_attenuation_db - in.noise_figure_db - in.fade_margin_db;
}

namespace {

double thermal_noise_a2(const ReceiverNoiseConfig& n) {
    return 4.0 * n.boltzmann_j_per_k * n.temperature_k * n.electrical_bandwidth_hz / n.load_resistance_ohm;
}

}  // namespace

double electrical_snr_linear(double p_received_w, const ReceiverNoiseConfig& noise) {
    require(nonnegative(p_received_w), "received power must be nonnegative");
    const double photocurrent = noise.responsivity_a_per_w * p_received_w;
    const double shot = 2.0 * kElectronCharge * (photocurrent + noise.dark_current_a) * noise.electrical_bandwidth_hz;
    const double denominator = shot + thermal_noise_a2(noise);
    if (photocurrent == 0.0) return 0.0;
    return photocurrent * photocurrent / denominator;
}

double received_power_for_snr(double snr_linear, const ReceiverNoiseConfig& noise) {
    require(nonnegative(snr_linear), "snr must be nonnegative");
    // i^2 - 2qBS i - S (2qB I_d + thermal) = 0, positive root.
    const double a = kElectronCharge * noise.electrical_bandwidth_hz * snr_linear;
    const double c = snr_linear * (2.0 * kElectronCharge * noise.electrical_bandwidth_hz * noise.dark_current_a +
                                   thermal_noise_a2(noise));
    const double photocurrent = a + std::sqrt(a * a + c);
    return photocurrent / noise.responsivity_a_per_w;
}

double channel_capacity(double bandwidth_hz, double snr_linear) {
    require(positive(bandwidth_hz), "bandwidth must be positive");
    require(snr_linear >= 0.0, "snr must be nonnegative");
    return bandwidth_hz * std::log2(1.0 + snr_linear);
}

namespace {

// erfc argument per unit sqrt(SNR).
double erfc_scale(OokScheme scheme) {
    return scheme == OokScheme::NrzOok ? 1.0 / (2.0 * std::numbers::sqrt2) : 0.5;
}

}  // namespace

double ber(OokScheme scheme, double snr_linear) {
    require(snr_linear >= 0.0, "snr must be nonnegative");
    return 0.5 * std::erfc(std::sqrt(snr_linear) * erfc_scale(scheme));
}

double required_snr_for_ber(OokScheme scheme, double target_ber) {
    require(target_ber > 0.0 && target_ber < 0.5, "target BER must lie in (0, 0.5)");
    // Find the smallest x with 0.5 erfc(x) <= target.
    double lo = 0.0;
    double hi = 1.0;
    while (0.5 * std::erfc(hi) > target_ber) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3) throw std::domain_error("target BER below representable range");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (0.5 * std::erfc(mid) <= target_ber) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    const double x2 = hi * hi;
    return scheme == OokScheme::NrzOok ? 8.0 * x2 : 4.0 * x2;
}

std::optional<PowerPenalty> power_penalty_db(const TransceiverConfig& cfg, const ReceiverNoiseConfig& noise,
                                             double clear_beta_per_km, double fog_beta_per_km, double range_km,
                                             double target_ber, OokScheme scheme) {
    noise.validate();
    require(nonnegative(clear_beta_per_km), "clear-air extinction must be nonnegative");
    require(nonnegative(fog_beta_per_km), "fog extinction must be nonnegative");
    require(fog_beta_per_km >= clear_beta_per_km, "fog extinction must not be below clear-air extinction");
    require(positive(range_km), "range must be positive");

    const double required_rx = received_power_for_snr(required_snr_for_ber(scheme, target_ber), noise);
    const double db_per_neper = 10.0 * std::log10(std::numbers::e);
    const double clear_gain = geometric_path_gain(cfg, db_per_neper * clear_beta_per_km, range_km);
    const double fog_gain = geometric_path_gain(cfg, db_per_neper * fog_beta_per_km, range_km);
    if (!(clear_gain > 0.0) || !(fog_gain > 0.0)) return std::nullopt;

    PowerPenalty out;
    out.clear_tx_power_w = required_rx / clear_gain;
    out.fog_tx_power_w = required_rx / fog_gain;
    if (!std::isfinite(out.clear_tx_power_w) || !std::isfinite(out.fog_tx_power_w)) return std::nullopt;
    out.penalty_db = 10.0 * std::log10(out.fog_tx_power_w / out.clear_tx_power_w);
    return out;
}

}  // namespace fsoqos::link
