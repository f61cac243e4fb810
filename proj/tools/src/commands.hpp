#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "fsoqos/dataset.hpp"

namespace fsoqos::cli {

enum ExitCode : int { kOk = 0, kGeneric = 1, kUsage = 2, kValidation = 3, kParse = 4, kTraining = 5 };

/// Maps an exception escaping a command to its documented exit status.
int exit_code_for(const std::exception& e);

/// Records from cfg.data_path, or synthesized from the station presets.
/// Restricted to cfg.stations when given.
std::vector<dataset::VisibilityRecord> load_records(const RunConfig& cfg);

/// Model names in training order.
const std::vector<std::string>& pipeline_models();

struct TrainSummary {
    std::vector<std::string> trained;
    std::vector<std::string> failed;  // "NAME: reason"
};

struct EvaluateSummary {
    std::vector<std::string> evaluated;
    std::vector<std::string> missing;
};

/// Each command writes into cfg.out_dir and returns the written paths.
std::vector<std::filesystem::path> cmd_attenuation_sweep(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_link_sweep(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_synth_data(const RunConfig& cfg);
/// Trains every model even when some fail; failures are listed in the summary and manifest.
TrainSummary cmd_train(const RunConfig& cfg);
/// Empty paths default to <out_dir>/models and <out_dir>/test.csv.
EvaluateSummary cmd_evaluate(const RunConfig& cfg, std::filesystem::path models_dir, std::filesystem::path test_path);
/// Copies the input rows and appends a prediction column. The input header
/// must be [station,] feature names in model order [, one trailing target].
std::size_t cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& input_path,
                        const std::filesystem::path& output_path);

/// Full command-line entry point; returns the exit status.
int run(int argc, char** argv);

}  // namespace fsoqos::cli
