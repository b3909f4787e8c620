#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace specal::cli {

/// Parses argv and dispatches. Exit codes: 0 success, 1 usage error,
/// 2 data error, 3 numerical failure.
int run(int argc, const char* const* argv);

struct SynthOptions {
    std::filesystem::path out_dir = "synth_out";
    std::uint64_t seed = 0;  // 0 -> resolved default
    int eggs = 30;
    int days = 22;
    double noise_sd = 0.004;
    bool scatter = true;
    double informative_fraction = 0.2;
};
void cmd_synth(const SynthOptions& opt);

struct PreprocessOptions {
    std::filesystem::path input;
    std::filesystem::path output;
    std::string prep = "raw";
    std::optional<std::filesystem::path> msc_reference;  // default: input itself
    int jobs = 0;
};
void cmd_preprocess(const PreprocessOptions& opt);

struct SelectOptions {
    std::filesystem::path input;
    std::filesystem::path output;
    std::string prep = "raw";
    std::optional<double> threshold;
    std::optional<std::filesystem::path> retained_output;
    int jobs = 0;
};
void cmd_select(const SelectOptions& opt);

struct CvOptions {
    std::filesystem::path input;
    std::filesystem::path out_dir = "cv_out";
    std::string model = "pls";  // pls | mlp
    int latent_variables = 10;
    std::string arch = "10";    // comma-separated hidden sizes
    std::string prep = "raw";
    double threshold = 100.0;
    int folds = 10;
    int reps = 5;
    std::uint64_t seed = 0;
    int jobs = 0;
    int max_epochs = 150;
    double learning_rate = 0.15;
    double lr_decay = 0.998;
    int patience = 25;
};
void cmd_cv(const CvOptions& opt);

struct TuneOptions {
    std::string phase;  // phase1 | savgol | phase2 | phase3 | all
    std::filesystem::path input;
    std::filesystem::path out_dir = "tune_out";
    bool full_scale = false;  // paper-shaped axes and 50 repetitions
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string prep;  // required for phase2/phase3
    std::string arch;  // required for phase3
    bool quiet = false;
};
void cmd_tune(const TuneOptions& opt);

struct FinalizeOptions {
    std::filesystem::path input;
    std::filesystem::path out_dir = "final_out";
    std::string prep = "savgol:67,5,3";
    std::string arch = "10";
    double threshold = 48.0;
    int folds = 10;
    int reps = 5;
    std::uint64_t seed = 0;
    int jobs = 0;
    int max_epochs = 150;
    double learning_rate = 0.15;
    double lr_decay = 0.998;
    int patience = 25;
};
void cmd_finalize(const FinalizeOptions& opt);

struct PredictOptions {
    std::filesystem::path model;
    std::filesystem::path input;
    std::filesystem::path output = "predictions.csv";
};
void cmd_predict(const PredictOptions& opt);

struct PlotOptions {
    std::optional<std::filesystem::path> spectra;
    std::optional<std::filesystem::path> phase_results;
    std::optional<std::filesystem::path> predictions;
    std::filesystem::path out_dir = "plots";
};
void cmd_plot(const PlotOptions& opt);

/// Default master seed: SPECAL_SEED from the environment when set,
/// otherwise the built-in constant.
std::uint64_t default_seed();

}  // namespace specal::cli
