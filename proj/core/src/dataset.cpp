#include "fsoqos/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "fsoqos/csv.hpp"
#include "fsoqos/error.hpp"
#include "fsoqos/rng.hpp"

namespace fsoqos::dataset {

namespace {

bool parse_date(std::string_view text, std::chrono::year_month_day& out) {
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    std::sscanf(std::string(text).c_str(), "%d-%u-%u", &y, &m, &d);
    out = std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d};
    return out.ok();
}

std::string format_date(const std::chrono::year_month_day& date) {
    char buffer[16];
    std::snprintf(buffer, sizeof(buffer), "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buffer;
}

bool parse_int(std::string_view text, int& out) {
    double value = 0.0;
    if (!csv::parse_double(text, value) || value != std::floor(value) || std::abs(value) > 1e6) return false;
    out = static_cast<int>(value);
    return true;
}

}  // namespace

VisibilityParseResult parse_visibility_csv(std::istream& in) {
    VisibilityParseResult result;
    std::string line;
    if (!csv::read_line(in, line)) throw ParseError(1, 1, "missing header row");
    if (line != kVisibilityHeader) {
        throw ParseError(1, 1, "unexpected header; expected '" + std::string(kVisibilityHeader) + "'");
    }
    std::size_t line_no = 1;
    while (csv::read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split_line(line);
        if (fields.size() != 6) {
            throw ParseError(line_no, std::min<std::size_t>(fields.size(), 6) + (fields.size() < 6 ? 1 : 0),
                             "expected 6 columns, found " + std::to_string(fields.size()));
        }
        VisibilityRecord rec;
        rec.station = fields[0];
        if (rec.station.empty()) throw ParseError(line_no, 1, "empty station name");
        if (!parse_date(fields[1], rec.date)) throw ParseError(line_no, 2, "invalid date '" + fields[1] + "'");
        if (!parse_int(fields[2], rec.hour) || rec.hour < 0 || rec.hour > 23) {
            throw ParseError(line_no, 3, "invalid hour '" + fields[2] + "'");
        }
        if (!csv::parse_double(fields[3], rec.visibility_km) || !std::isfinite(rec.visibility_km)) {
            throw ParseError(line_no, 4, "invalid visibility '" + fields[3] + "'");
        }
        if (!csv::parse_double(fields[4], rec.wind_speed_mps) || !std::isfinite(rec.wind_speed_mps)) {
            throw ParseError(line_no, 5, "invalid wind speed '" + fields[4] + "'");
        }
        if (!csv::parse_double(fields[5], rec.altitude_m) || !std::isfinite(rec.altitude_m)) {
            throw ParseError(line_no, 6, "invalid altitude '" + fields[5] + "'");
        }
        if (!(rec.visibility_km > 0.0)) {
            result.rejected.push_back({line_no, "nonpositive visibility"});
            continue;
        }
        if (rec.wind_speed_mps < 0.0) {
            result.rejected.push_back({line_no, "negative wind speed"});
            continue;
        }
        if (std::find(kSynopticHours.begin(), kSynopticHours.end(), rec.hour) == kSynopticHours.end()) {
            result.warnings.push_back({line_no, "non-synoptic hour " + std::to_string(rec.hour)});
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

void write_visibility_csv(std::ostream& out, std::span<const VisibilityRecord> records) {
    out << kVisibilityHeader << '\n';
    for (const auto& r : records) {
        out << r.station << ',' << format_date(r.date) << ',' << r.hour << ',' << csv::format_double(r.visibility_km)
            << ',' << csv::format_double(r.wind_speed_mps) << ',' << csv::format_double(r.altitude_m) << '\n';
    }
}

std::map<std::string, StationClimatology> aggregate_station_climatology(std::span<const VisibilityRecord> records,
                                                                        const std::vector<std::string>& stations,
                                                                        const ClimatologyOptions& options) {
    std::map<std::string, StationClimatology> out;
    for (const auto& rec : records) {
        if (!stations.empty() && std::find(stations.begin(), stations.end(), rec.station) == stations.end()) continue;
        auto& clim = out[rec.station];
        clim.station = rec.station;
        ++clim.n_records;
        clim.mean_visibility_km += rec.visibility_km;
        for (double lambda : options.wavelengths_nm) {
            atmosphere::OpticalPath path;
            path.wavelength_nm = lambda;
            path.visibility_km = rec.visibility_km;
            path.reference_wavelength_nm = options.reference_wavelength_nm;
            path.transmittance_threshold = options.transmittance_threshold;
            clim.mean_extinction_per_km[lambda] += atmosphere::extinction_coefficient(path, options.model);
        }
    }
    for (const auto& name : stations) {
        if (out.find(name) == out.end()) throw std::out_of_range("no records for station '" + name + "'");
    }
    for (auto& [name, clim] : out) {
        const auto n = static_cast<double>(clim.n_records);
        clim.mean_visibility_km /= n;
        for (auto& [lambda, beta] : clim.mean_extinction_per_km) beta /= n;
    }
    return out;
}

std::vector<StationProfile> default_station_profiles() {
    return {
        {"Polokwane", 9.0, 0.9, 3.2, 1230.0},
        {"Kimberley", 12.0, 0.8, 3.8, 1197.0},
        {"Bloemfontein", 10.0, 0.9, 3.6, 1351.0},
        {"George", 6.0, 1.0, 3.0, 193.0},
    };
}

std::optional<StationProfile> find_station_profile(const std::string& name) {
    for (auto& p : default_station_profiles()) {
        if (p.name == name) return p;
    }
    return std::nullopt;
}

namespace {

// Synthetic visibility is clipped to the range reported by synoptic observers.
constexpr double kMinVisibilityKm = 0.05;
constexpr double kMaxVisibilityKm = 60.0;

}  // namespace

std::vector<VisibilityRecord> synthesize_dataset(std::span<const StationProfile> profiles, std::size_t n_days,
                                                 std::uint64_t seed) {
    std::vector<VisibilityRecord> out;
    out.reserve(profiles.size() * n_days * kSynopticHours.size());
    const std::chrono::sys_days start = std::chrono::year{2010} / std::chrono::January / std::chrono::day{1};
    for (std::size_t s = 0; s < profiles.size(); ++s) {
        const auto& p = profiles[s];
        if (!(p.log_sigma > 0.0)) throw std::domain_error("lognormal sigma must be positive");
        if (!(p.mean_visibility_km > 0.0)) throw std::domain_error("mean visibility must be positive");
        Rng rng(derive_seed(seed, s));
        const double mu = std::log(p.mean_visibility_km) - 0.5 * p.log_sigma * p.log_sigma;
        constexpr double wind_sigma = 0.5;
        const double wind_mu = std::log(std::max(p.mean_wind_mps, 1e-3)) - 0.5 * wind_sigma * wind_sigma;
        for (std::size_t d = 0; d < n_days; ++d) {
            const std::chrono::year_month_day date{start + std::chrono::days{static_cast<long>(d)}};
            for (int hour : kSynopticHours) {
                VisibilityRecord rec;
                rec.station = p.name;
                rec.date = date;
                rec.hour = hour;
                const double vis = std::exp(mu + p.log_sigma * rng.normal());
                rec.visibility_km = std::clamp(vis, kMinVisibilityKm, kMaxVisibilityKm);
                rec.wind_speed_mps = p.mean_wind_mps > 0.0 ? std::exp(wind_mu + wind_sigma * rng.normal()) : 0.0;
                rec.altitude_m = p.altitude_m;
                out.push_back(std::move(rec));
            }
        }
    }
    return out;
}

LabeledTable build_qos_table(std::span<const VisibilityRecord> records, const QosSweep& sweep,
                             const link::TransceiverConfig& transceiver, const link::ReceiverNoiseConfig& noise,
                             const link::RfBudgetInputs& budget) {
    if (records.empty()) throw std::domain_error("no visibility records");
    if (sweep.wavelengths_nm.empty() || sweep.tx_powers_w.empty()) throw std::domain_error("empty sweep grid");
    if (!(sweep.range_km > 0.0)) throw std::domain_error("link range must be positive");
    noise.validate();

    const std::size_t rows = records.size() * sweep.wavelengths_nm.size() * sweep.tx_powers_w.size() * 2;
    std::vector<double> features;
    std::vector<double> targets;
    std::vector<std::string> groups;
    features.reserve(rows * qos_feature_names().size());
    targets.reserve(rows);
    groups.reserve(rows);

    for (const auto& rec : records) {
        for (double lambda : sweep.wavelengths_nm) {
            atmosphere::OpticalPath path;
            path.wavelength_nm = lambda;
            path.range_km = sweep.range_km;
            path.visibility_km = rec.visibility_km;
            const double beta = atmosphere::extinction_coefficient(path, sweep.model);
            const double atten_db_per_km = atmosphere::to_db_per_km(beta);
            const double path_loss_db = atmosphere::path_attenuation_db(beta, sweep.range_km);
            for (double power : sweep.tx_powers_w) {
                link::TransceiverConfig cfg = transceiver;
                cfg.tx_power_w = power;
                cfg.wavelength_nm = lambda;
                const double p_rx = link::received_power_geometric(cfg, atten_db_per_km, sweep.range_km);
                const double rate = link::achievable_data_rate(p_rx, lambda, cfg.photons_per_bit, noise);
                link::RfBudgetInputs in = budget;
                in.tx_power_dbm = link::watts_to_dbm(power);
                in.wavelength_m = lambda * 1e-9;
                in.total_attenuation_db = path_loss_db;
                const double snr_db = link::snr_budget_db(in);
                for (double modulation : {0.0, 1.0}) {
                    features.insert(features.end(), {modulation, rate, atten_db_per_km, power, lambda});
                    targets.push_back(snr_db);
                    groups.push_back(rec.station);
                }
            }
        }
    }
    return LabeledTable(qos_feature_names(), std::move(features), std::move(targets), std::move(groups));
}

std::array<std::vector<std::size_t>, 3> split_indices(std::size_t rows, const std::array<double, 3>& fractions,
                                                      std::uint64_t seed) {
    double sum = 0.0;
    for (double f : fractions) {
        if (!(f > 0.0)) throw std::domain_error("split fractions must be positive");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("split fractions must sum to 1");

    std::array<std::size_t, 3> counts{};
    std::array<double, 3> remainders{};
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double exact = fractions[i] * static_cast<double>(rows);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        remainders[i] = exact - std::floor(exact);
        assigned += counts[i];
    }
    std::array<std::size_t, 3> by_remainder{0, 1, 2};
    std::stable_sort(by_remainder.begin(), by_remainder.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t i = 0; assigned < rows; ++i, ++assigned) ++counts[by_remainder[i % 3]];

    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    std::array<std::vector<std::size_t>, 3> parts;
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        parts[i].assign(order.begin() + static_cast<long>(cursor), order.begin() + static_cast<long>(cursor + counts[i]));
        cursor += counts[i];
    }
    return parts;
}

SplitTables split_dataset(const LabeledTable& table, const std::array<double, 3>& fractions, std::uint64_t seed) {
    const auto parts = split_indices(table.rows(), fractions, seed);
    return {table.subset(parts[0]), table.subset(parts[1]), table.subset(parts[2])};
}

void write_table_csv(std::ostream& out, const LabeledTable& table, std::string_view target_name) {
    if (table.has_groups()) out << "station,";
    for (const auto& name : table.feature_names()) out << name << ',';
    out << target_name << '\n';
    for (std::size_t i = 0; i < table.rows(); ++i) {
        if (table.has_groups()) out << table.groups()[i] << ',';
        for (double v : table.row(i)) out << csv::format_double(v) << ',';
        out << csv::format_double(table.target(i)) << '\n';
    }
}

LabeledTable read_table_csv(std::istream& in) {
    std::string line;
    if (!csv::read_line(in, line)) throw ParseError(1, 1, "missing header row");
    auto header = csv::split_line(line);
    const bool grouped = !header.empty() && header.front() == "station";
    const std::size_t first = grouped ? 1 : 0;
    if (header.size() < first + 2) throw ParseError(1, 1, "table needs at least one feature and a target column");
    std::vector<std::string> names(header.begin() + static_cast<long>(first), header.end() - 1);

    std::vector<double> features;
    std::vector<double> targets;
    std::vector<std::string> groups;
    std::size_t line_no = 1;
    while (csv::read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split_line(line);
        if (fields.size() != header.size()) {
            throw ParseError(line_no, 1, "expected " + std::to_string(header.size()) + " columns, found " +
                                             std::to_string(fields.size()));
        }
        if (grouped) groups.push_back(fields[0]);
        for (std::size_t c = first; c < fields.size(); ++c) {
            double v = 0.0;
            if (!csv::parse_double(fields[c], v) || !std::isfinite(v)) {
                throw ParseError(line_no, c + 1, "invalid number '" + fields[c] + "'");
            }
            (c + 1 == fields.size() ? targets : features).push_back(v);
        }
    }
    return LabeledTable(std::move(names), std::move(features), std::move(targets), std::move(groups));
}

}  // namespace fsoqos::dataset
