#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "fsoqos/dataset.hpp"
#include "fsoqos/error.hpp"

using namespace fsoqos;
using namespace fsoqos::dataset;
using namespace std::chrono;

namespace {

const char* kThreeRows =
    "station,date,hour,visibility_km,wind_speed_mps,altitude_m\n"
    "George,2015-03-01,8,4.5,2.1,193\n"
    "George,2015-03-01,14,12,3.3,193\n"
    "Kimberley,2015-03-01,20,0.8,0,1197\n";

VisibilityRecord record(std::string station, double v) {
    VisibilityRecord r;
    r.station = std::move(station);
    r.date = year{2012} / 5 / 17;
    r.visibility_km = v;
    return r;
}

std::size_t parse_error_line(const std::string& text, std::size_t* column = nullptr) {
    std::istringstream in(text);
    try {
        parse_visibility_csv(in);
    } catch (const ParseError& e) {
        if (column) *column = e.column();
        return e.line();
    }
    return 0;
}

}  // namespace

TEST(VisibilityCsv, RoundTrip) {
    std::istringstream in(kThreeRows);
    const auto parsed = parse_visibility_csv(in);
    ASSERT_EQ(parsed.records.size(), 3u);
    EXPECT_TRUE(parsed.rejected.empty());
    EXPECT_TRUE(parsed.warnings.empty());
    EXPECT_EQ(parsed.records[2].station, "Kimberley");
    EXPECT_EQ(parsed.records[2].date, year{2015} / 3 / 1);
    EXPECT_EQ(parsed.records[1].visibility_km, 12.0);

    std::ostringstream out;
    write_visibility_csv(out, parsed.records);
    EXPECT_EQ(out.str(), kThreeRows);
}

TEST(VisibilityCsv, NonpositiveVisibilityRejected) {
    std::istringstream in(
        "station,date,hour,visibility_km,wind_speed_mps,altitude_m\n"
        "George,2015-03-01,8,0,2.1,193\n"
        "George,2015-03-01,14,3,-1,193\n"
        "George,2015-03-01,20,3,1,193\n");
    const auto parsed = parse_visibility_csv(in);
    EXPECT_EQ(parsed.records.size(), 1u);
    ASSERT_EQ(parsed.rejected.size(), 2u);
    EXPECT_EQ(parsed.rejected[0].line, 2u);
    EXPECT_EQ(parsed.rejected[0].reason, "nonpositive visibility");
    EXPECT_EQ(parsed.rejected[1].line, 3u);
}

TEST(VisibilityCsv, OffSynopticHourWarns) {
    std::istringstream in(
        "station,date,hour,visibility_km,wind_speed_mps,altitude_m\n"
        "George,2015-03-01,11,5,2.1,193\n");
    const auto parsed = parse_visibility_csv(in);
    EXPECT_EQ(parsed.records.size(), 1u);
    ASSERT_EQ(parsed.warnings.size(), 1u);
    EXPECT_EQ(parsed.warnings[0].reason, "non-synoptic hour 11");
}

TEST(VisibilityCsv, ParseErrorsCarryPosition) {
    const std::string header = "station,date,hour,visibility_km,wind_speed_mps,altitude_m\n";
    std::size_t col = 0;
    EXPECT_EQ(parse_error_line(header + "George,2015-03-01,8,5,2,193\nGeorge,2015-02-30,8,5,2,193\n", &col), 3u);
    EXPECT_EQ(col, 2u);
    EXPECT_EQ(parse_error_line(header + "George,2015-03-01,24,5,2,193\n", &col), 2u);
    EXPECT_EQ(col, 3u);
    EXPECT_EQ(parse_error_line(header + "George,2015-03-01,8,fog,2,193\n", &col), 2u);
    EXPECT_EQ(col, 4u);
    EXPECT_EQ(parse_error_line(header + "George,2015-03-01,8,5,2\n"), 2u);
    EXPECT_EQ(parse_error_line("station,date\n"), 1u);
    EXPECT_EQ(parse_error_line(""), 1u);
}

TEST(Climatology, MeansPerStation) {
    const std::vector<VisibilityRecord> recs{record("A", 1.0), record("A", 3.0), record("B", 10.0)};
    ClimatologyOptions opt;
    opt.wavelengths_nm = {1550.0};
    const auto c = aggregate_station_climatology(recs, {}, opt);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c.at("A").n_records, 2u);
    EXPECT_EQ(c.at("A").mean_visibility_km, 2.0);
    // per-record beta averaged, not beta at the mean visibility
    EXPECT_NEAR(c.at("A").mean_extinction_per_km.at(1550.0), 1.4439525309618964, 1e-13);
}

TEST(Climatology, MissingStationThrows) {
    const std::vector<VisibilityRecord> recs{record("A", 1.0)};
    EXPECT_THROW(aggregate_station_climatology(recs, {"A", "Z"}), std::out_of_range);
    EXPECT_EQ(aggregate_station_climatology(recs, {"A"}).size(), 1u);
}

TEST(Synthesis, ShapeAndDeterminism) {
    const auto profiles = default_station_profiles();
    ASSERT_EQ(profiles.size(), 4u);
    const auto one = synthesize_dataset(std::span(profiles).first(1), 1, 5);
    ASSERT_EQ(one.size(), 3u);
    std::set<int> hours;
    for (const auto& r : one) {
        hours.insert(r.hour);
        EXPECT_EQ(r.date, year{2010} / 1 / 1);
        EXPECT_GT(r.visibility_km, 0.0);
    }
    EXPECT_EQ(hours, (std::set<int>{8, 14, 20}));

    const auto a = synthesize_dataset(profiles, 30, 9);
    const auto b = synthesize_dataset(profiles, 30, 9);
    const auto c = synthesize_dataset(profiles, 30, 10);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_EQ(a.size(), 4u * 30 * 3);
}

TEST(Synthesis, LongRunMeanMatchesProfile) {
    for (double mean : {5.0, 6.0, 12.0}) {
        StationProfile p;
        p.name = "S";
        p.mean_visibility_km = mean;
        p.log_sigma = 0.9;
        const std::vector<StationProfile> ps{p};
        const auto recs = synthesize_dataset(ps, 3650, 42);
        const auto c = aggregate_station_climatology(recs);
        EXPECT_NEAR(c.at("S").mean_visibility_km, mean, 0.05 * mean);
    }
}

TEST(Synthesis, PresetsByName) {
    EXPECT_TRUE(find_station_profile("George"));
    EXPECT_FALSE(find_station_profile("Durban"));
}

TEST(QosTable, ShapeAndTarget) {
    const std::vector<VisibilityRecord> recs{record("A", 0.7), record("B", 4.0)};
    const QosSweep sweep;
    const link::TransceiverConfig tx;
    const link::ReceiverNoiseConfig noise;
    const link::RfBudgetInputs budget;
    const auto t = build_qos_table(recs, sweep, tx, noise, budget);
    EXPECT_EQ(t.rows(), 2u * 5 * 5 * 2);
    EXPECT_EQ(t.feature_names(), qos_feature_names());
    ASSERT_TRUE(t.has_groups());
    EXPECT_EQ(t.groups().front(), "A");
    EXPECT_EQ(t.groups().back(), "B");

    for (std::size_t i = 0; i < t.rows(); ++i) {
        const double atten = t.at(i, 2);
        const double power = t.at(i, 3);
        const double lambda = t.at(i, 4);
        link::RfBudgetInputs in = budget;
        in.tx_power_dbm = link::watts_to_dbm(power);
        in.wavelength_m = lambda * 1e-9;
        in.total_attenuation_db = atten * sweep.range_km;
        EXPECT_NEAR(t.target(i), link::snr_budget_db(in), 1e-9);
    }
    // modulation pairs differ only in the modulation flag
    for (std::size_t i = 0; i + 1 < t.rows(); i += 2) {
        EXPECT_EQ(t.at(i, 0), 0.0);
        EXPECT_EQ(t.at(i + 1, 0), 1.0);
        for (std::size_t j = 1; j < t.cols(); ++j) EXPECT_EQ(t.at(i, j), t.at(i + 1, j));
        EXPECT_EQ(t.target(i), t.target(i + 1));
    }
}

TEST(QosTable, EmptyInput) {
    EXPECT_THROW(build_qos_table({}, QosSweep{}, {}, {}, {}), std::domain_error);
}

TEST(Split, SizesAndPartition) {
    const auto parts = split_indices(100, {0.7, 0.15, 0.15}, 3);
    EXPECT_EQ(parts[0].size(), 70u);
    EXPECT_EQ(parts[1].size(), 15u);
    EXPECT_EQ(parts[2].size(), 15u);
    std::set<std::size_t> all;
    for (const auto& p : parts) all.insert(p.begin(), p.end());
    EXPECT_EQ(all.size(), 100u);

    for (std::size_t m : {7u, 11u, 33u, 101u}) {
        const auto s = split_indices(m, {0.7, 0.15, 0.15}, 1);
        EXPECT_EQ(s[0].size() + s[1].size() + s[2].size(), m);
        EXPECT_LE(std::abs(static_cast<double>(s[0].size()) - 0.7 * static_cast<double>(m)), 1.0);
    }
    EXPECT_EQ(split_indices(50, {0.7, 0.15, 0.15}, 8), split_indices(50, {0.7, 0.15, 0.15}, 8));
}

TEST(TableCsv, RoundTrip) {
    const LabeledTable t({"a", "b"}, {1.0, 0.1, -2.5, 1e-20, 3.0, 1e300}, {0.3, 7.0, -1.0}, {"X", "Y", "X"});
    std::ostringstream out;
    write_table_csv(out, t, "y");
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "station,a,b,y");
    std::istringstream in(out.str());
    const auto back = read_table_csv(in);
    EXPECT_EQ(back.feature_names(), t.feature_names());
    EXPECT_EQ(back.features(), t.features());
    EXPECT_EQ(back.targets(), t.targets());
    EXPECT_EQ(back.groups(), t.groups());

    const LabeledTable plain({"a"}, {1.0, 2.0}, {3.0, 4.0});
    std::ostringstream out2;
    write_table_csv(out2, plain, "y");
    std::istringstream in2(out2.str());
    EXPECT_FALSE(read_table_csv(in2).has_groups());
}
