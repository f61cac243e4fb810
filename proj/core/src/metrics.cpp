#include "fsoqos/metrics.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "fsoqos/csv.hpp"
#include "fsoqos/error.hpp"

namespace fsoqos {

MetricReport compute_metrics(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) throw std::domain_error("compute_metrics: length mismatch");
    if (actual.empty()) throw std::domain_error("compute_metrics: empty input");
    const std::size_t n = actual.size();
    const double count = static_cast<double>(n);

    double sq = 0.0;
    double abs_sum = 0.0;
    double pct = 0.0;
    bool mape_defined = true;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = actual[i] - predicted[i];
        sq += d * d;
        abs_sum += std::abs(d);
        if (actual[i] == 0.0) {
            mape_defined = false;
        } else {
            pct += std::abs(d / actual[i]);
        }
        mean += actual[i];
    }
    mean /= count;
    double total = 0.0;
    for (double a : actual) total += (a - mean) * (a - mean);

    MetricReport r;
    r.n = n;
    r.mse = sq / count;
    r.mae = abs_sum / count;
    r.rmse = std::sqrt(r.mse);
    if (mape_defined) r.mape = pct / count;
    if (total > 0.0) r.r2 = 1.0 - sq / total;
    return r;
}

namespace {

std::string optional_field(const std::optional<double>& v) { return v ? csv::format_double(*v) : "NA"; }

}  // namespace

void write_metrics_csv(std::ostream& out, std::span<const MetricRow> rows) {
    out << kMetricsHeader << '\n';
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << row.model << ',' << row.location << ',' << r.n << ',' << csv::format_double(r.mse) << ','
            << csv::format_double(r.mae) << ',' << optional_field(r.mape) << ',' << csv::format_double(r.rmse) << ','
            << optional_field(r.r2) << '\n';
    }
}

std::vector<MetricRow> read_metrics_csv(std::istream& in) {
    std::string line;
    if (!csv::read_line(in, line) || line != kMetricsHeader) {
        throw ParseError(1, 1, std::string("expected header '") + kMetricsHeader + "'");
    }
    std::vector<MetricRow> rows;
    std::size_t line_no = 1;
    while (csv::read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = csv::split_line(line);
        if (f.size() != 8) throw ParseError(line_no, 1, "expected 8 columns");
        auto number = [&](std::size_t c) {
            double v = 0.0;
            if (!csv::parse_double(f[c], v)) throw ParseError(line_no, c + 1, "invalid number '" + f[c] + "'");
            return v;
        };
        auto optional = [&](std::size_t c) -> std::optional<double> {
            if (f[c] == "NA") return std::nullopt;
            return number(c);
        };
        MetricRow row;
        row.model = f[0];
        row.location = f[1];
        const double n = number(2);
        if (n < 0 || n != std::floor(n)) throw ParseError(line_no, 3, "invalid count '" + f[2] + "'");
        row.report.n = static_cast<std::size_t>(n);
        row.report.mse = number(3);
        row.report.mae = number(4);
        row.report.mape = optional(5);
        row.report.rmse = number(6);
        row.report.r2 = optional(7);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string metrics_json(const MetricRow& row) {
    const auto& r = row.report;
    nlohmann::ordered_json j;
    j["model"] = row.model;
    j["location"] = row.location;
    j["n"] = r.n;
    j["mse"] = r.mse;
    j["mae"] = r.mae;
    j["mape"] = r.mape ? nlohmann::ordered_json(*r.mape) : nlohmann::ordered_json(nullptr);
    j["rmse"] = r.rmse;
    j["r2"] = r.r2 ? nlohmann::ordered_json(*r.r2) : nlohmann::ordered_json(nullptr);
    return j.dump();
}

}  // namespace fsoqos
