#pragma once

#include <optional>
#include <string_view>

namespace fsoqos::link {

/// Speed of light used for photon energy (m/s).
inline constexpr double kSpeedOfLight = 2.998e8;
/// Elementary charge (C).
inline constexpr double kElectronCharge = 1.602e-19;

/// Optical front-end parameters. The apertures and photons-per-bit have no
/// standard value; the defaults here are plain working choices.
struct TransceiverConfig {
    double tx_power_w = 0.1;
    double divergence_mrad = 3.0;
    double tx_efficiency = 0.8;
    double rx_efficiency = 0.8;
    double tx_aperture_m = 0.1;
    double rx_aperture_m = 0.1;
    double wavelength_nm = 1550.0;
    double rx_sensitivity_dbm = -40.0;
    double photons_per_bit = 100.0;

    void validate() const;
};

/// PIN photodiode receiver noise parameters.
struct ReceiverNoiseConfig {
    double responsivity_a_per_w = 0.7;
    double load_resistance_ohm = 1000.0;
    double dark_current_a = 10e-9;
    double temperature_k = 298.0;
    double electrical_bandwidth_hz = 1.0e9;
    double boltzmann_j_per_k = 1.380649e-23;
    double planck_js = 6.626e-34;

    void validate() const;
};

/// Inputs of the RF-style SNR budget. Power is in dBm, gains are linear.
struct RfBudgetInputs {
    double tx_power_dbm = 20.0;
    double tx_gain_linear = 1.0;
    double rx_gain_linear = 1.0;
    double wavelength_m = 1550e-9;
    double noise_bandwidth_hz = 1e6;
    double ambient_temp_k = 298.0;
    double boltzmann_j_per_k = 1.380649e-23;
    double total_attenuation_db = 0.0;
    double noise_figure_db = 0.0;
    double fade_margin_db = 0.0;

    void validate() const;
};

enum class OokScheme { NrzOok, RzOok };

std::string_view to_string(OokScheme scheme);

double watts_to_dbm(double watts);
double dbm_to_watts(double dbm);
double db_to_linear(double db);
double linear_to_db(double linear);

/// E_p = h c / lambda (J).
double photon_energy(double wavelength_nm, const ReceiverNoiseConfig& noise = {});

/// Received power for a diverging beam leaving a finite transmit aperture:
///   P_tx d_r^2 / (d_t + theta L)^2 * 10^(-gamma L / 10).
/// Efficiencies are not applied by this form.
double received_power_geometric(const TransceiverConfig& cfg, double atten_db_per_km, double range_km);

/// Geometric gain P_rx / P_tx of received_power_geometric.
double geometric_path_gain(const TransceiverConfig& cfg, double atten_db_per_km, double range_km);

/// Far-field aperture form:
///   P_tx D_r^2 / (theta^2 L^2) * 10^(-gamma L / 10) * eta_t * eta_r,
/// capped at P_tx eta_t eta_r. Singular at L = 0 (throws).
double received_power_aperture(const TransceiverConfig& cfg, double atten_db_per_km, double range_km);

/// R = 4 P_rx / (pi E_p N_b).
double achievable_data_rate(double p_received_w, double wavelength_nm, double photons_per_bit,
                            const ReceiverNoiseConfig& noise = {});

/// Closed-form data rate written directly in terms of the link parameters:
///   P_tx eta_t eta_r 10^(-gamma L/10) D^2 / (pi (theta/2)^2 L^2 E_p N_b).
double achievable_data_rate_direct(const TransceiverConfig& cfg, double atten_db_per_km, double range_km,
                                   const ReceiverNoiseConfig& noise = {});

/// RF-style SNR budget in dB, evaluated term by term:
///   P - 30 - 10log G_t + 10log G_r - 20log(4 pi / lambda) - 10log(B T k) - tau - NF - FM.
/// Note the transmit-gain term enters with a minus sign.
double snr_budget_db(const RfBudgetInputs& inputs);

/// PIN electrical SNR with shot and thermal noise:
///   (R P)^2 / (2 q (R P + I_d) B + 4 k T B / R_L).
double electrical_snr_linear(double p_received_w, const ReceiverNoiseConfig& noise = {});

/// Inverse of electrical_snr_linear: the received power reaching `snr_linear`.
double received_power_for_snr(double snr_linear, const ReceiverNoiseConfig& noise = {});

/// Shannon capacity B log2(1 + SNR).
double channel_capacity(double bandwidth_hz, double snr_linear);

/// OOK bit-error rate. NRZ: 0.5 erfc(sqrt(S) / (2 sqrt 2)); RZ: 0.5 erfc(sqrt(S) / 2).
double ber(OokScheme scheme, double snr_linear);

/// Smallest SNR with ber(scheme, SNR) <= target_ber, by bisection on the
/// erfc argument. RZ results are exactly half the NRZ ones.
double required_snr_for_ber(OokScheme scheme, double target_ber);

struct PowerPenalty {
    double clear_tx_power_w = 0.0;
    double fog_tx_power_w = 0.0;
    double penalty_db = 0.0;
};

/// Extra transmit power (dB) needed under fog relative to clear air to hold
/// `target_ber` at `range_km`. Returns std::nullopt when the fog-channel
/// requirement is not representable as a finite power.
std::optional<PowerPenalty> power_penalty_db(const TransceiverConfig& cfg, const ReceiverNoiseConfig& noise,
                                             double clear_beta_per_km, double fog_beta_per_km, double range_km,
                                             double target_ber, OokScheme scheme = OokScheme::NrzOok);

}  // namespace fsoqos::link
