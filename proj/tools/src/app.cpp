#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fsoqos/error.hpp"

namespace fsoqos::cli {

namespace {

void print_paths(const std::vector<std::filesystem::path>& paths) {
    for (const auto& p : paths) std::cout << p.string() << '\n';
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Fog-limited FSO link modelling and QoS prediction"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string config_path;
    std::string out_dir = ".";
    std::string stations;
    auto* seed_opt = app.add_option("--seed", seed, "Global random seed (overrides the config file)");
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--out-dir", out_dir, "Directory receiving all outputs");
    app.add_option("--stations", stations, "Comma-separated station names");

    auto* attenuation = app.add_subcommand("attenuation-sweep", "Extinction and specific attenuation vs visibility");
    auto* link_sweep = app.add_subcommand("link-sweep", "Data rate, received power, BER, capacity and power penalty sweeps");
    auto* synth = app.add_subcommand("synth-data", "Write a seeded synthetic visibility CSV");
    std::string data_path;
    auto* train = app.add_subcommand("train", "Fit RF, GBR, ADBR, SR and MLNN on the QoS table");
    train->add_option("--data", data_path, "Visibility CSV (default: synthesized)");
    for (auto* sub : {link_sweep}) sub->add_option("--data", data_path, "Visibility CSV (default: synthesized)");

    std::string models_dir;
    std::string test_path;
    auto* evaluate = app.add_subcommand("evaluate", "Metrics per model and station on the held-out split");
    evaluate->add_option("--models", models_dir, "Directory of model files (default: <out-dir>/models)");
    evaluate->add_option("--test", test_path, "Held-out table (default: <out-dir>/test.csv)");

    std::string model_path;
    std::string input_path;
    std::string output_path;
    auto* predict = app.add_subcommand("predict", "Append model predictions to a feature CSV");
    predict->add_option("--model", model_path, "Serialized model file")->required();
    predict->add_option("--input", input_path, "Feature CSV")->required();
    predict->add_option("--output", output_path, "Output CSV (default: <out-dir>/predicted.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    seed_given = seed_opt->count() > 0;

    try {
        RunConfig cfg;
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        if (seed_given) cfg.seed = seed;
        cfg.out_dir = out_dir;
        if (!data_path.empty()) cfg.data_path = data_path;
        if (!stations.empty()) {
            std::stringstream ss(stations);
            std::string s;
            while (std::getline(ss, s, ',')) {
                if (!s.empty()) cfg.stations.push_back(s);
            }
        }

        if (attenuation->parsed()) {
            print_paths(cmd_attenuation_sweep(cfg));
        } else if (link_sweep->parsed()) {
            print_paths(cmd_link_sweep(cfg));
        } else if (synth->parsed()) {
            print_paths(cmd_synth_data(cfg));
        } else if (train->parsed()) {
            const auto summary = cmd_train(cfg);
            for (const auto& name : summary.trained) std::cout << "trained " << name << '\n';
            for (const auto& f : summary.failed) std::cerr << "error: training failed for " << f << '\n';
            if (!summary.failed.empty()) return kTraining;
        } else if (evaluate->parsed()) {
            const auto summary = cmd_evaluate(cfg, models_dir, test_path);
            for (const auto& name : summary.evaluated) std::cout << "evaluated " << name << '\n';
        } else if (predict->parsed()) {
            const auto out = output_path.empty() ? cfg.out_dir / "predicted.csv" : std::filesystem::path(output_path);
            const auto rows = cmd_predict(model_path, input_path, out);
            std::cout << out.string() << " (" << rows << " rows)\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kOk;
}

}  // namespace fsoqos::cli
