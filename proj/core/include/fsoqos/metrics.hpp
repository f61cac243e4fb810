#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fsoqos {

/// MAPE is a fraction. It is absent when an actual value is zero; R2 is
/// absent when the actual values have zero variance.
struct MetricReport {
    std::size_t n = 0;
    double mse = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
    std::optional<double> mape;
    std::optional<double> r2;
};

MetricReport compute_metrics(std::span<const double> actual, std::span<const double> predicted);

struct MetricRow {
    std::string model;
    std::string location;
    MetricReport report;
};

inline constexpr const char* kMetricsHeader = "model,location,n,MSE,MAE,MAPE,RMSE,R2";

/// Undefined MAPE / R2 are written as NA.
void write_metrics_csv(std::ostream& out, std::span<const MetricRow> rows);
std::vector<MetricRow> read_metrics_csv(std::istream& in);
/// One JSON object with lower-case keys: model, location, n, mse, mae, mape, rmse, r2.
std::string metrics_json(const MetricRow& row);

}  // namespace fsoqos
