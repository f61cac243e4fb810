#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fsoqos/csv.hpp"
#include "fsoqos/error.hpp"
#include "fsoqos/metrics.hpp"
#include "fsoqos/rng.hpp"
#include "fsoqos/serialization.hpp"

namespace fsoqos::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using csv::format_double;

namespace {

// Stream indices under the global seed, one per consumer.
enum SeedStream : std::uint64_t {
    kSynthStream = 1,
    kSubsampleStream = 2,
    kSplitStream = 3,
    kModelStream = 10,
};

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError({path.string()}, "cannot open " + path.string());
    return in;
}

void require_nonempty(const std::vector<double>& grid, const std::string& key) {
    if (grid.empty()) throw ValidationError({key}, key + ": empty grid");
}

std::map<std::string, dataset::StationClimatology> climatology(const RunConfig& cfg) {
    const auto records = load_records(cfg);
    dataset::ClimatologyOptions options;
    options.wavelengths_nm = cfg.wavelengths_nm;
    options.model = cfg.model;
    return dataset::aggregate_station_climatology(records, cfg.stations, options);
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
        dynamic_cast<const std::domain_error*>(&e) || dynamic_cast<const std::out_of_range*>(&e)) {
        return kValidation;
    }
    if (dynamic_cast<const ParseError*>(&e)) return kParse;
    if (dynamic_cast<const TrainingError*>(&e)) return kTraining;
    return kGeneric;
}

std::vector<dataset::VisibilityRecord> load_records(const RunConfig& cfg) {
    if (!cfg.data_path.empty()) {
        auto in = open_input(cfg.data_path);
        auto parsed = dataset::parse_visibility_csv(in);
        for (const auto& r : parsed.rejected) {
            std::cerr << cfg.data_path.string() << ":" << r.line << ": rejected: " << r.reason << '\n';
        }
        if (!cfg.stations.empty()) {
            std::vector<std::string> absent;
            for (const auto& s : cfg.stations) {
                const bool found = std::any_of(parsed.records.begin(), parsed.records.end(),
                                               [&](const auto& rec) { return rec.station == s; });
                if (!found) absent.push_back(s);
            }
            if (!absent.empty()) throw ValidationError(absent, "stations without records in " + cfg.data_path.string());
            std::erase_if(parsed.records, [&](const auto& rec) {
                return std::find(cfg.stations.begin(), cfg.stations.end(), rec.station) == cfg.stations.end();
            });
        }
        if (parsed.records.empty()) throw ValidationError({"data"}, "no usable visibility records");
        return std::move(parsed.records);
    }
    std::vector<dataset::StationProfile> profiles;
    if (cfg.stations.empty()) {
        profiles = dataset::default_station_profiles();
    } else {
        std::vector<std::string> unknown;
        for (const auto& s : cfg.stations) {
            if (auto p = dataset::find_station_profile(s)) {
                profiles.push_back(*p);
            } else {
                unknown.push_back(s);
            }
        }
        if (!unknown.empty()) throw ValidationError(unknown, "unknown station preset");
    }
    return dataset::synthesize_dataset(profiles, cfg.n_days, derive_seed(cfg.seed, kSynthStream));
}

std::vector<fs::path> cmd_attenuation_sweep(const RunConfig& cfg) {
    cfg.validate();
    const auto visibilities = make_grid(cfg.visibility_min_km, cfg.visibility_max_km, cfg.visibility_step_km);
    require_nonempty(visibilities, "visibility_min_km");
    require_nonempty(cfg.wavelengths_nm, "wavelengths_nm");
    const fs::path path = cfg.out_dir / "attenuation_sweep.csv";
    auto out = open_output(path);
    out << "model,visibility_km,wavelength_nm,q,beta_per_km,atten_db_per_km\n";
    for (double v : visibilities) {
        for (double lambda : cfg.wavelengths_nm) {
            atmosphere::OpticalPath p;
            p.visibility_km = v;
            p.wavelength_nm = lambda;
            const double q = atmosphere::particle_size_exponent(v, cfg.model);
            const double beta = atmosphere::extinction_coefficient(p, cfg.model);
            out << atmosphere::to_string(cfg.model) << ',' << format_double(v) << ',' << format_double(lambda) << ','
                << format_double(q) << ',' << format_double(beta) << ',' << format_double(atmosphere::to_db_per_km(beta))
                << '\n';
        }
    }
    return {path};
}

std::vector<fs::path> cmd_link_sweep(const RunConfig& cfg) {
    cfg.validate();
    cfg.transceiver.validate();
    cfg.noise.validate();
    const auto attenuations =
        make_grid(cfg.attenuation_min_db_per_km, cfg.attenuation_max_db_per_km, cfg.attenuation_step_db_per_km);
    const auto ranges = make_grid(cfg.range_min_km, cfg.range_max_km, cfg.range_step_km);
    require_nonempty(cfg.wavelengths_nm, "wavelengths_nm");
    require_nonempty(cfg.tx_powers_w, "tx_powers_w");
    std::vector<fs::path> written;

    {
        const fs::path path = cfg.out_dir / "data_rate_vs_attenuation.csv";
        auto out = open_output(path);
        out << "wavelength_nm,tx_power_w,range_km,attenuation_db_per_km,received_power_w,data_rate_bps\n";
        for (double lambda : cfg.wavelengths_nm) {
            auto t = cfg.transceiver;
            t.wavelength_nm = lambda;
            for (double a : attenuations) {
                const double p_rx = link::received_power_geometric(t, a, cfg.link_range_km);
                const double rate = link::achievable_data_rate(p_rx, lambda, t.photons_per_bit, cfg.noise);
                out << format_double(lambda) << ',' << format_double(t.tx_power_w) << ','
                    << format_double(cfg.link_range_km) << ',' << format_double(a) << ',' << format_double(p_rx) << ','
                    << format_double(rate) << '\n';
            }
        }
        written.push_back(path);
    }

    const auto clim = climatology(cfg);
    {
        const fs::path path = cfg.out_dir / "received_power_vs_range.csv";
        auto out = open_output(path);
        out << "station,wavelength_nm,range_km,attenuation_db_per_km,received_power_w,received_power_dbm\n";
        for (const auto& [station, c] : clim) {
            for (double lambda : cfg.wavelengths_nm) {
                auto t = cfg.transceiver;
                t.wavelength_nm = lambda;
                const double a = atmosphere::to_db_per_km(c.mean_extinction_per_km.at(lambda));
                for (double range : ranges) {
                    const double p_rx = link::received_power_geometric(t, a, range);
                    out << station << ',' << format_double(lambda) << ',' << format_double(range) << ','
                        << format_double(a) << ',' << format_double(p_rx) << ','
                        << (p_rx > 0.0 ? format_double(link::watts_to_dbm(p_rx)) : std::string("-inf")) << '\n';
                }
            }
        }
        written.push_back(path);
    }

    {
        const fs::path path = cfg.out_dir / "ber_vs_attenuation.csv";
        auto out = open_output(path);
        out << "wavelength_nm,tx_power_w,range_km,attenuation_db_per_km,received_power_w,snr_linear,ber_nrz,ber_rz\n";
        for (double power : cfg.tx_powers_w) {
            auto t = cfg.transceiver;
            t.tx_power_w = power;
            for (double a : attenuations) {
                const double p_rx = link::received_power_geometric(t, a, cfg.link_range_km);
                const double snr = link::electrical_snr_linear(p_rx, cfg.noise);
                out << format_double(t.wavelength_nm) << ',' << format_double(power) << ','
                    << format_double(cfg.link_range_km) << ',' << format_double(a) << ',' << format_double(p_rx) << ','
                    << format_double(snr) << ',' << format_double(link::ber(link::OokScheme::NrzOok, snr)) << ','
                    << format_double(link::ber(link::OokScheme::RzOok, snr)) << '\n';
            }
        }
        written.push_back(path);
    }

    {
        const fs::path path = cfg.out_dir / "capacity_vs_range.csv";
        auto out = open_output(path);
        out << "station,wavelength_nm,range_km,path_loss_db,snr_db,snr_linear,capacity_bps\n";
        for (const auto& [station, c] : clim) {
            for (double lambda : cfg.wavelengths_nm) {
                const double beta = c.mean_extinction_per_km.at(lambda);
                for (double range : ranges) {
                    auto b = cfg.budget;
                    b.tx_power_dbm = link::watts_to_dbm(cfg.transceiver.tx_power_w);
                    b.wavelength_m = lambda * 1e-9;
                    b.total_attenuation_db = atmosphere::path_attenuation_db(beta, range);
                    const double snr_db = link::snr_budget_db(b);
                    const double snr = link::db_to_linear(snr_db);
                    out << station << ',' << format_double(lambda) << ',' << format_double(range) << ','
                        << format_double(b.total_attenuation_db) << ',' << format_double(snr_db) << ','
                        << format_double(snr) << ',' << format_double(link::channel_capacity(cfg.capacity_bandwidth_hz, snr))
                        << '\n';
                }
            }
        }
        written.push_back(path);
    }

    {
        const fs::path path = cfg.out_dir / "capacity_vs_snr.csv";
        auto out = open_output(path);
        out << "bandwidth_hz,snr_linear,capacity_bps\n";
        for (double snr : cfg.capacity_snr_points) {
            out << format_double(cfg.capacity_bandwidth_hz) << ',' << format_double(snr) << ','
                << format_double(link::channel_capacity(cfg.capacity_bandwidth_hz, snr)) << '\n';
        }
        written.push_back(path);
    }

    {
        const fs::path path = cfg.out_dir / "power_penalty_vs_range.csv";
        auto out = open_output(path);
        out << "fog_class,visibility_km,range_km,clear_tx_power_w,fog_tx_power_w,penalty_db\n";
        atmosphere::OpticalPath clear_path;
        clear_path.wavelength_nm = cfg.transceiver.wavelength_nm;
        clear_path.visibility_km = cfg.clear_visibility_km;
        const double clear_beta = atmosphere::extinction_coefficient(clear_path, cfg.model);
        for (const auto& fog : cfg.fog_classes) {
            atmosphere::OpticalPath fog_path = clear_path;
            fog_path.visibility_km = fog.visibility_km;
            const double fog_beta = atmosphere::extinction_coefficient(fog_path, cfg.model);
            for (double range : ranges) {
                const auto p = link::power_penalty_db(cfg.transceiver, cfg.noise, clear_beta, fog_beta, range, cfg.target_ber);
                out << fog.name << ',' << format_double(fog.visibility_km) << ',' << format_double(range) << ',';
                if (p) {
                    out << format_double(p->clear_tx_power_w) << ',' << format_double(p->fog_tx_power_w) << ','
                        << format_double(p->penalty_db) << '\n';
                } else {
                    out << "NA,NA,NA\n";
                }
            }
        }
        written.push_back(path);
    }
    return written;
}

std::vector<fs::path> cmd_synth_data(const RunConfig& cfg) {
    cfg.validate();
    auto data_cfg = cfg;
    data_cfg.data_path.clear();
    const auto records = load_records(data_cfg);
    const fs::path path = cfg.out_dir / "visibility.csv";
    auto out = open_output(path);
    dataset::write_visibility_csv(out, records);
    return {path};
}

const std::vector<std::string>& pipeline_models() {
    static const std::vector<std::string> names{"RF", "GBR", "ADBR", "SR", "MLNN"};
    return names;
}

namespace {

struct FitOutcome {
    AnyModel model;
    std::vector<std::array<double, 2>> epoch_losses;  // MLP only, in target units
};

FitOutcome fit_pipeline_model(const std::string& name, const RunConfig& cfg, const LabeledTable& train,
                              const LabeledTable& validation, std::uint64_t seed) {
    learners::ForestOptions forest;
    forest.n_trees = cfg.rf_trees;
    forest.min_leaf_size = cfg.rf_min_leaf;
    forest.seed = seed;
    learners::GradientBoostOptions gbr;
    gbr.n_trees = cfg.gbr_trees;
    gbr.learning_rate = cfg.gbr_learning_rate;
    gbr.max_depth = cfg.gbr_max_depth;
    learners::AdaBoostR2Options adbr;
    adbr.n_rounds = cfg.adbr_rounds;
    adbr.max_depth = cfg.adbr_max_depth;

    if (name == "RF") return {learners::fit_random_forest(train, forest), {}};
    if (name == "GBR") return {learners::fit_gradient_boost(train, gbr), {}};
    if (name == "ADBR") return {learners::fit_adaboost_r2(train, adbr), {}};
    if (name == "SR") {
        stacking::StackConfig stack;
        auto stack_forest = forest;
        stack_forest.n_trees = cfg.stack_rf_trees;
        stack.base_learners = {learners::ForestSpec{stack_forest}, learners::GradientBoostSpec{gbr},
                               learners::AdaBoostR2Spec{adbr}, learners::TreeSpec{}};
        stack.n_folds = cfg.stack_folds;
        stack.seed = seed;
        return {stacking::fit_stacked(train, stack), {}};
    }
    if (name == "MLNN") {
        neural::TrainConfig tc;
        tc.learning_rate = cfg.mlp_learning_rate;
        tc.epochs = cfg.mlp_epochs;
        tc.batch_size = cfg.mlp_batch;
        tc.seed = seed;
        tc.early_stop_patience = cfg.mlp_patience;
        auto init = neural::MlpModel::initialized({train.cols(), cfg.mlp_hidden, 1}, cfg.mlp_activation,
                                                  neural::ActivationKind::Direct, seed);
        auto result = neural::train(std::move(init), train, &validation, tc);
        const double s2 = result.model.scaling().target_scale * result.model.scaling().target_scale;
        FitOutcome outcome{std::move(result.model), {}};
        for (std::size_t e = 0; e < result.history.train_loss.size(); ++e) {
            const double v = e < result.history.validation_loss.size() ? result.history.validation_loss[e] : NAN;
            outcome.epoch_losses.push_back({result.history.train_loss[e] * s2, v * s2});
        }
        return outcome;
    }
    throw std::logic_error("unknown pipeline model " + name);
}

double table_mse(const AnyModel& model, const LabeledTable& t) {
    if (t.empty()) return NAN;
    double sum = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const double d = predict_any(model, t.row(i)) - t.target(i);
        sum += d * d;
    }
    return sum / static_cast<double>(t.rows());
}

}  // namespace

TrainSummary cmd_train(const RunConfig& cfg) {
    cfg.validate();
    const auto records = load_records(cfg);
    dataset::QosSweep sweep;
    sweep.wavelengths_nm = cfg.wavelengths_nm;
    sweep.tx_powers_w = cfg.tx_powers_w;
    sweep.range_km = cfg.link_range_km;
    sweep.model = cfg.model;
    auto table = dataset::build_qos_table(records, sweep, cfg.transceiver, cfg.noise, cfg.budget);
    const std::size_t total_rows = table.rows();
    if (table.rows() > cfg.max_rows) {
        std::vector<std::size_t> idx(table.rows());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        Rng rng(derive_seed(cfg.seed, kSubsampleStream));
        rng.shuffle(idx);
        idx.resize(cfg.max_rows);
        std::sort(idx.begin(), idx.end());
        table = table.subset(idx);
    }
    const auto split = dataset::split_dataset(table, cfg.split_fractions, derive_seed(cfg.seed, kSplitStream));
    const std::array<std::pair<const char*, const LabeledTable*>, 3> parts{
        {{"train.csv", &split.train}, {"validation.csv", &split.validation}, {"test.csv", &split.test}}};
    for (const auto& [file, t] : parts) {
        auto out = open_output(cfg.out_dir / file);
        dataset::write_table_csv(out, *t, dataset::kQosTargetName);
    }

    TrainSummary summary;
    json manifest;
    manifest["seed"] = cfg.seed;
    manifest["feature_names"] = table.feature_names();
    manifest["target"] = dataset::kQosTargetName;
    manifest["rows"] = json{{"generated", total_rows},
                            {"used", table.rows()},
                            {"train", split.train.rows()},
                            {"validation", split.validation.rows()},
                            {"test", split.test.rows()}};
    json models = json::array();

    auto log = open_output(cfg.out_dir / "training_log.csv");
    log << "model,epoch,train_mse,validation_mse\n";

    const auto& names = pipeline_models();
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& name = names[i];
        const auto seed = derive_seed(cfg.seed, kModelStream + i);
        const fs::path rel = fs::path("models") / (name + ".json");
        json entry{{"name", name}, {"file", rel.generic_string()}, {"seed", seed}};
        try {
            auto outcome = fit_pipeline_model(name, cfg, split.train, split.validation, seed);
            ModelFile file{std::move(outcome.model), table.feature_names(), seed};
            const auto text = serialize_model(file);
            auto out = open_output(cfg.out_dir / rel);
            out << text;
            const auto doc = json::parse(text);
            entry["type"] = doc["type"];
            entry["hyperparameters"] = doc["hyperparameters"];
            entry["status"] = "ok";
            if (outcome.epoch_losses.empty()) {
                log << name << ",final," << format_double(table_mse(file.model, split.train)) << ','
                    << format_double(table_mse(file.model, split.validation)) << '\n';
            } else {
                for (std::size_t e = 0; e < outcome.epoch_losses.size(); ++e) {
                    log << name << ',' << e << ',' << format_double(outcome.epoch_losses[e][0]) << ','
                        << format_double(outcome.epoch_losses[e][1]) << '\n';
                }
            }
            summary.trained.push_back(name);
        } catch (const std::exception& e) {
            entry["status"] = "failed";
            entry["error"] = e.what();
            summary.failed.push_back(name + ": " + e.what());
        }
        models.push_back(std::move(entry));
    }
    manifest["models"] = std::move(models);
    auto out = open_output(cfg.out_dir / "manifest.json");
    out << manifest.dump(2) << '\n';
    return summary;
}

EvaluateSummary cmd_evaluate(const RunConfig& cfg, fs::path models_dir, fs::path test_path) {
    if (models_dir.empty()) models_dir = cfg.out_dir / "models";
    if (test_path.empty()) test_path = cfg.out_dir / "test.csv";
    auto in = open_input(test_path);
    const auto test = dataset::read_table_csv(in);

    EvaluateSummary summary;
    std::vector<std::pair<std::string, ModelFile>> loaded;
    for (const auto& name : pipeline_models()) {
        const auto path = models_dir / (name + ".json");
        if (!fs::exists(path)) {
            summary.missing.push_back(path.string());
            continue;
        }
        auto file = load_model(path);
        if (file.feature_names != test.feature_names()) {
            throw SchemaError(path.string() + ": feature names do not match " + test_path.string());
        }
        loaded.emplace_back(name, std::move(file));
    }

    std::vector<std::vector<double>> predictions(loaded.size(), std::vector<double>(test.rows()));
    for (std::size_t m = 0; m < loaded.size(); ++m) {
        for (std::size_t i = 0; i < test.rows(); ++i) predictions[m][i] = predict_any(loaded[m].second.model, test.row(i));
    }

    std::set<std::string> stations(test.groups().begin(), test.groups().end());
    std::vector<MetricRow> rows;
    for (std::size_t m = 0; m < loaded.size(); ++m) {
        for (const auto& station : stations) {
            std::vector<double> a;
            std::vector<double> p;
            for (std::size_t i = 0; i < test.rows(); ++i) {
                if (test.groups()[i] == station) {
                    a.push_back(test.target(i));
                    p.push_back(predictions[m][i]);
                }
            }
            rows.push_back({loaded[m].first, station, compute_metrics(a, p)});
        }
        if (!test.empty()) rows.push_back({loaded[m].first, "ALL", compute_metrics(test.targets(), predictions[m])});
        summary.evaluated.push_back(loaded[m].first);
    }
    {
        auto out = open_output(cfg.out_dir / "metrics.csv");
        write_metrics_csv(out, rows);
    }
    {
        auto out = open_output(cfg.out_dir / "predictions.csv");
        out << "row,station,actual";
        for (const auto& [name, _] : loaded) out << ',' << name;
        out << '\n';
        for (std::size_t i = 0; i < test.rows(); ++i) {
            out << i << ',' << (test.has_groups() ? test.groups()[i] : std::string()) << ','
                << format_double(test.target(i));
            for (const auto& col : predictions) out << ',' << format_double(col[i]);
            out << '\n';
        }
    }
    if (!summary.missing.empty()) {
        std::string what = "missing model files:";
        for (const auto& m : summary.missing) what += "\n  " + m;
        throw ValidationError(summary.missing, what);
    }
    return summary;
}

std::size_t cmd_predict(const fs::path& model_path, const fs::path& input_path, const fs::path& output_path) {
    if (!fs::exists(model_path)) throw ValidationError({model_path.string()}, "model file not found: " + model_path.string());
    const auto file = load_model(model_path);
    auto in = open_input(input_path);
    auto out = open_output(output_path);

    std::string line;
    if (!csv::read_line(in, line) || line.empty()) {
        for (const auto& n : file.feature_names) out << n << ',';
        out << "prediction\n";
        return 0;
    }
    const auto header = csv::split_line(line);
    const std::size_t first = !header.empty() && header.front() == "station" ? 1 : 0;
    const std::size_t k = file.feature_names.size();
    const bool names_match = header.size() >= first + k &&
                             std::equal(file.feature_names.begin(), file.feature_names.end(), header.begin() + first);
    if (!names_match || header.size() > first + k + 1) {
        std::string got;
        for (std::size_t c = first; c < header.size(); ++c) got += (c > first ? "," : "") + header[c];
        std::string want;
        for (std::size_t c = 0; c < k; ++c) want += (c ? "," : "") + file.feature_names[c];
        throw SchemaError("feature columns '" + got + "' do not match the model's '" + want + "'");
    }
    out << line << ",prediction\n";

    std::size_t rows = 0;
    std::size_t line_no = 1;
    std::vector<double> x(k);
    while (csv::read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split_line(line);
        if (fields.size() != header.size()) throw ParseError(line_no, 1, "column count differs from header");
        for (std::size_t c = 0; c < k; ++c) {
            if (!csv::parse_double(fields[first + c], x[c]) || !std::isfinite(x[c])) {
                throw ParseError(line_no, first + c + 1, "invalid number '" + fields[first + c] + "'");
            }
        }
        out << line << ',' << format_double(predict_any(file.model, x)) << '\n';
        ++rows;
    }
    return rows;
}

}  // namespace fsoqos::cli
