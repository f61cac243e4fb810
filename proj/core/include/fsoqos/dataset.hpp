#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fsoqos/atmosphere.hpp"
#include "fsoqos/link_budget.hpp"
#include "fsoqos/table.hpp"

namespace fsoqos::dataset {

/// One synoptic visibility observation.
struct VisibilityRecord {
    std::string station;
    std::chrono::year_month_day date{};
    int hour = 8;
    double visibility_km = 0.0;
    double wind_speed_mps = 0.0;
    double altitude_m = 0.0;

    bool operator==(const VisibilityRecord&) const = default;
};

/// Observation hours of the source archive.
inline constexpr std::array<int, 3> kSynopticHours{8, 14, 20};

struct RowIssue {
    std::size_t line = 0;
    std::string reason;
};

struct VisibilityParseResult {
    std::vector<VisibilityRecord> records;
    /// Rows dropped for violating an invariant (e.g. nonpositive visibility).
    std::vector<RowIssue> rejected;
    /// Accepted rows with a note (e.g. non-synoptic hour).
    std::vector<RowIssue> warnings;
};

inline constexpr std::string_view kVisibilityHeader = "station,date,hour,visibility_km,wind_speed_mps,altitude_m";

/// Reads `station,date,hour,visibility_km,wind_speed_mps,altitude_m` with a
/// header row and ISO dates. Malformed rows throw ParseError with the line
/// and column.
VisibilityParseResult parse_visibility_csv(std::istream& in);
void write_visibility_csv(std::ostream& out, std::span<const VisibilityRecord> records);

struct StationClimatology {
    std::string station;
    std::size_t n_records = 0;
    double mean_visibility_km = 0.0;
    /// Wavelength (nm) -> mean over records of the per-record extinction (km^-1).
    std::map<double, double> mean_extinction_per_km;
};

struct ClimatologyOptions {
    std::vector<double> wavelengths_nm{760.0, 860.0, 960.0, 1260.0, 1550.0};
    atmosphere::AttenuationModel model = atmosphere::AttenuationModel::Kim;
    double reference_wavelength_nm = 550.0;
    double transmittance_threshold = 0.02;
};

/// Per-station mean visibility and mean extinction. Extinction is computed
/// per record and then averaged. Every station listed in `stations` must
/// have at least one record (std::out_of_range otherwise); an empty list
/// means every station present.
std::map<std::string, StationClimatology> aggregate_station_climatology(
    std::span<const VisibilityRecord> records, const std::vector<std::string>& stations = {},
    const ClimatologyOptions& options = {});

/// Lognormal visibility profile for the synthetic generator.
struct StationProfile {
    std::string name;
    double mean_visibility_km = 8.0;
    double log_sigma = 0.9;
    double mean_wind_mps = 3.5;
    double altitude_m = 0.0;
};

/// Illustrative presets for four inland and coastal stations. The values are
/// arbitrary defaults, not measurements.
std::vector<StationProfile> default_station_profiles();
std::optional<StationProfile> find_station_profile(const std::string& name);

/// Three observations per day (08, 14, 20 h) per station starting
/// 2010-01-01, deterministic in `seed`.
std::vector<VisibilityRecord> synthesize_dataset(std::span<const StationProfile> profiles, std::size_t n_days,
                                                 std::uint64_t seed);

/// Feature columns of the QoS table, in order.
inline const std::vector<std::string>& qos_feature_names() {
    static const std::vector<std::string> names{"modulation", "data_rate_bps", "attenuation_db_per_km", "tx_power_w",
                                                "wavelength_nm"};
    return names;
}
inline constexpr std::string_view kQosTargetName = "snr_db";

struct QosSweep {
    std::vector<double> wavelengths_nm{760.0, 860.0, 960.0, 1260.0, 1550.0};
    std::vector<double> tx_powers_w{0.005, 0.025, 0.05, 0.075, 0.1};
    double range_km = 1.0;
    atmosphere::AttenuationModel model = atmosphere::AttenuationModel::Kim;
};

/// Cartesian product records x wavelengths x powers x {NRZ, RZ}. Attenuation
/// comes from the record's visibility, the data rate from the geometric
/// received power, and the target from the SNR budget with the path loss as
/// its attenuation term. Rows are grouped by station.
LabeledTable build_qos_table(std::span<const VisibilityRecord> records, const QosSweep& sweep,
                             const link::TransceiverConfig& transceiver, const link::ReceiverNoiseConfig& noise,
                             const link::RfBudgetInputs& budget);

struct SplitTables {
    LabeledTable train;
    LabeledTable validation;
    LabeledTable test;
};

/// Shuffled three-way partition; sizes are within one row of the exact
/// proportions (largest-remainder rounding).
SplitTables split_dataset(const LabeledTable& table, const std::array<double, 3>& fractions, std::uint64_t seed);

/// Row indices per part, as used by split_dataset.
std::array<std::vector<std::size_t>, 3> split_indices(std::size_t rows, const std::array<double, 3>& fractions,
                                                      std::uint64_t seed);

/// Table CSV: optional `station` column first, then the feature columns, then
/// the target column.
void write_table_csv(std::ostream& out, const LabeledTable& table, std::string_view target_name);
/// Inverse of write_table_csv; the last column is the target.
LabeledTable read_table_csv(std::istream& in);

}  // namespace fsoqos::dataset
