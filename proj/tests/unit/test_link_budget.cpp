#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "fsoqos/atmosphere.hpp"
#include "fsoqos/link_budget.hpp"

using namespace fsoqos::link;

namespace {

constexpr double kDbPerNeper = 4.342944819032518;

TransceiverConfig oracle_link() {
    TransceiverConfig cfg;
    cfg.tx_power_w = 0.1;
    cfg.tx_aperture_m = 0.1;
    cfg.rx_aperture_m = 0.1;
    cfg.divergence_mrad = 3.0;
    return cfg;
}

}  // namespace

TEST(PhotonEnergy, HcOverLambda) {
    EXPECT_NEAR(photon_energy(1550) / 1.2815966451612902e-19, 1.0, 1e-12);
    EXPECT_NEAR(photon_energy(550) / 3.611772363636363e-19, 1.0, 1e-12);
    // Halving the wavelength doubles the energy.
    EXPECT_NEAR(photon_energy(775) / photon_energy(1550), 2.0, 1e-12);
    EXPECT_THROW(photon_energy(0.0), std::domain_error);
}

TEST(ReceivedPower, GeometricForm) {
    const double gamma = 2.13 * kDbPerNeper;
    EXPECT_NEAR(received_power_geometric(oracle_link(), gamma, 1.0) / 1.2366003522623279e-05, 1.0, 1e-10);
}

TEST(ReceivedPower, ApertureForm) {
    const double gamma = 2.13 * kDbPerNeper;
    EXPECT_NEAR(received_power_aperture(oracle_link(), gamma, 1.0) / 8.45065200728247e-06, 1.0, 1e-10);
}

TEST(ReceivedPower, ApertureFormCappedAtShortRange) {
    const auto cfg = oracle_link();
    const double cap = cfg.tx_power_w * cfg.tx_efficiency * cfg.rx_efficiency;
    EXPECT_DOUBLE_EQ(received_power_aperture(cfg, 0.0, 1e-3), cap);
    EXPECT_THROW(received_power_aperture(cfg, 0.0, 0.0), std::domain_error);
}

TEST(ReceivedPower, NonincreasingInRangeAndAttenuation) {
    const auto cfg = oracle_link();
    for (double gamma : {0.0, 1.0, 10.0, 100.0}) {
        double previous = INFINITY;
        for (double range = 0.0; range <= 10.0; range += 0.05) {
            const double p = received_power_geometric(cfg, gamma, range);
            EXPECT_LE(p, previous);
            previous = p;
        }
    }
    for (double range : {0.1, 1.0, 5.0}) {
        double previous = INFINITY;
        for (double gamma = 0.0; gamma <= 60.0; gamma += 0.5) {
            const double p = received_power_geometric(cfg, gamma, range);
            EXPECT_LE(p, previous);
            previous = p;
        }
    }
}

TEST(ReceivedPower, ZeroRangeGivesApertureRatio) {
    const auto cfg = oracle_link();
    EXPECT_DOUBLE_EQ(received_power_geometric(cfg, 50.0, 0.0), cfg.tx_power_w);
}

TEST(DataRate, FourPOverPiEpNb) {
    EXPECT_NEAR(achievable_data_rate(1e-6, 1550, 100) / 99347914926.45677, 1.0, 1e-12);
    EXPECT_EQ(achievable_data_rate(0.0, 1550, 100), 0.0);
    EXPECT_THROW(achievable_data_rate(-1.0, 1550, 100), std::domain_error);
    EXPECT_THROW(achievable_data_rate(1e-6, 1550, 0.0), std::domain_error);
}

TEST(DataRate, LinearInReceivedPower) {
    const double base = achievable_data_rate(1e-6, 1260, 50);
    for (double k : {0.5, 2.0, 10.0, 1e3}) {
        EXPECT_NEAR(achievable_data_rate(k * 1e-6, 1260, 50) / (k * base), 1.0, 1e-10);
    }
}

TEST(DataRate, DirectFormEqualsRateOfUncappedApertureForm) {
    auto cfg = oracle_link();
    for (double range : {0.5, 1.0, 3.0}) {
        for (double gamma : {0.0, 4.0, 20.0}) {
            // Uncapped aperture power, written out independently.
            const double theta = cfg.divergence_mrad * 1e-3;
            const double p_rx = cfg.tx_power_w * cfg.rx_aperture_m * cfg.rx_aperture_m /
                                (theta * theta * range * 1e3 * range * 1e3) * std::pow(10.0, -gamma * range / 10.0) *
                                cfg.tx_efficiency * cfg.rx_efficiency;
            EXPECT_NEAR(achievable_data_rate_direct(cfg, gamma, range) /
                            achievable_data_rate(p_rx, cfg.wavelength_nm, cfg.photons_per_bit),
                        1.0, 1e-12);
        }
    }
}

TEST(SnrBudget, TermByTerm) {
    RfBudgetInputs in;
    in.tx_power_dbm = 30.0;
    EXPECT_NEAR(snr_budget_db(in), 5.679441215419018, 1e-9);
    in.total_attenuation_db = 3.0;
    in.noise_figure_db = 2.0;
    in.fade_margin_db = 1.0;
    EXPECT_NEAR(snr_budget_db(in), 5.679441215419018 - 6.0, 1e-9);
    in = RfBudgetInputs{};
    in.tx_power_dbm = 40.0;
    EXPECT_NEAR(snr_budget_db(in), 15.679441215419018, 1e-9);
}

TEST(SnrBudget, RejectsNonpositiveInputs) {
    RfBudgetInputs in;
    in.noise_bandwidth_hz = 0.0;
    EXPECT_THROW(snr_budget_db(in), std::domain_error);
    in = RfBudgetInputs{};
    in.wavelength_m = -1.0;
    EXPECT_THROW(snr_budget_db(in), std::domain_error);
}

TEST(ElectricalSnr, PinReceiverOracle) {
    EXPECT_NEAR(electrical_snr_linear(1e-6) / 29.368012220123376, 1.0, 1e-12);
    EXPECT_EQ(electrical_snr_linear(0.0), 0.0);
}

TEST(ElectricalSnr, InverseRoundTrip) {
    for (double p : {1e-9, 1e-7, 1e-6, 1e-4, 1e-2}) {
        EXPECT_NEAR(received_power_for_snr(electrical_snr_linear(p)) / p, 1.0, 1e-9);
    }
    EXPECT_EQ(received_power_for_snr(0.0), 0.0);
}

TEST(Capacity, ShannonAnchor) {
    const double c = channel_capacity(1e9, 25.07);
    EXPECT_NEAR(c, 4704318677.760832, 1e-3);
    EXPECT_NEAR(c / 4.705e9, 1.0, 0.005);
    EXPECT_EQ(channel_capacity(1e9, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(channel_capacity(1e9, 1.0), 1e9);
    EXPECT_THROW(channel_capacity(0.0, 1.0), std::domain_error);
    EXPECT_THROW(channel_capacity(1e9, -0.5), std::domain_error);
}

TEST(Ber, ErfcOracle) {
    // Numerical integration of the Gaussian tail, 40 digits.
    EXPECT_NEAR(ber(OokScheme::NrzOok, 36.0) / 1.349898031630094526e-3, 1.0, 1e-12);
}

TEST(Ber, ZeroSnrIsHalf) {
    EXPECT_EQ(ber(OokScheme::NrzOok, 0.0), 0.5);
    EXPECT_EQ(ber(OokScheme::RzOok, 0.0), 0.5);
}

TEST(Ber, RzAtSnrEqualsNrzAtDoubleSnr) {
    for (double s : {0.1, 1.0, 10.0, 100.0, 500.0}) {
        const double rz = ber(OokScheme::RzOok, s);
        const double nrz = ber(OokScheme::NrzOok, 2.0 * s);
        EXPECT_NEAR(rz, nrz, 1e-12 * nrz);
    }
}

TEST(Ber, StrictlyDecreasingInSnr) {
    for (auto scheme : {OokScheme::NrzOok, OokScheme::RzOok}) {
        double previous = 0.5;
        for (double s = 0.25; s < 1500.0; s *= 1.3) {
            const double b = ber(scheme, s);
            EXPECT_LT(b, previous);
            previous = b;
        }
    }
}

TEST(Ber, RejectsNegativeSnr) { EXPECT_THROW(ber(OokScheme::NrzOok, -1.0), std::domain_error); }

TEST(RequiredSnr, InvertsBer) {
    for (double target : {1e-3, 1e-6, 1e-9, 1e-12}) {
        for (auto scheme : {OokScheme::NrzOok, OokScheme::RzOok}) {
            const double s = required_snr_for_ber(scheme, target);
            EXPECT_NEAR(ber(scheme, s) / target, 1.0, 1e-6);
        }
        EXPECT_EQ(required_snr_for_ber(OokScheme::RzOok, target), required_snr_for_ber(OokScheme::NrzOok, target) / 2.0);
    }
    EXPECT_THROW(required_snr_for_ber(OokScheme::NrzOok, 0.5), std::domain_error);
    EXPECT_THROW(required_snr_for_ber(OokScheme::NrzOok, 0.0), std::domain_error);
}

TEST(PowerPenalty, ZeroInClearAir) {
    const TransceiverConfig cfg;
    const ReceiverNoiseConfig noise;
    for (double range : {0.1, 1.0, 5.0}) {
        const auto p = power_penalty_db(cfg, noise, 0.17, 0.17, range, 1e-9);
        ASSERT_TRUE(p.has_value());
        EXPECT_EQ(p->penalty_db, 0.0);
    }
}

TEST(PowerPenalty, EqualsExtraPathLoss) {
    const TransceiverConfig cfg;
    const ReceiverNoiseConfig noise;
    const auto p = power_penalty_db(cfg, noise, 0.2, 3.0, 1.5, 1e-9);
    ASSERT_TRUE(p.has_value());
    EXPECT_NEAR(p->penalty_db, fsoqos::atmosphere::path_attenuation_db(3.0 - 0.2, 1.5), 1e-9);
    EXPECT_NEAR(10.0 * std::log10(p->fog_tx_power_w / p->clear_tx_power_w), p->penalty_db, 1e-9);
}

TEST(PowerPenalty, MonotoneInFogDensityAndRange) {
    const TransceiverConfig cfg;
    const ReceiverNoiseConfig noise;
    for (double range : {0.2, 0.5, 1.0}) {
        double previous = -1.0;
        for (double beta : {0.5, 2.0, 5.0, 8.0, 20.0}) {
            const auto p = power_penalty_db(cfg, noise, 0.17, beta, range, 1e-9);
            ASSERT_TRUE(p.has_value());
            EXPECT_GT(p->penalty_db, previous);
            previous = p->penalty_db;
        }
    }
}

TEST(PowerPenalty, UnrepresentableRequirementIsEmpty) {
    const TransceiverConfig cfg;
    const ReceiverNoiseConfig noise;
    EXPECT_FALSE(power_penalty_db(cfg, noise, 0.17, 300.0, 10.0, 1e-9).has_value());
}

TEST(Conversions, DbmAndLinear) {
    EXPECT_DOUBLE_EQ(watts_to_dbm(1e-3), 0.0);
    EXPECT_DOUBLE_EQ(watts_to_dbm(0.1), 20.0);
    EXPECT_NEAR(dbm_to_watts(watts_to_dbm(0.0371)), 0.0371, 1e-15);
    EXPECT_NEAR(db_to_linear(linear_to_db(25.07)), 25.07, 1e-12);
}

TEST(Validation, Configs) {
    TransceiverConfig cfg;
    cfg.tx_efficiency = 1.5;
    EXPECT_THROW(cfg.validate(), std::domain_error);
    ReceiverNoiseConfig noise;
    noise.load_resistance_ohm = 0.0;
    EXPECT_THROW(noise.validate(), std::domain_error);
}
