#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specal/feature_select.hpp"
#include "specal/folds.hpp"
#include "specal/metrics.hpp"
#include "specal/mlp.hpp"
#include "specal/pls.hpp"
#include "specal/preprocess.hpp"
#include "specal/spectra.hpp"

#include <nlohmann/json_fwd.hpp>

namespace specal {

struct PlsSpec {
    int n_components = 10;
};

struct MlpSpec {
    MlpArchitecture architecture{{10}};
    TrainConfig train{};
    /// Scales the initial rate to min(rate, 1.5/last_hidden) so wide final
    /// hidden layers stay inside the full-batch stability region. Grid runs
    /// keep this on; explicit single trainings may switch it off.
    bool auto_rate = true;
};

using ModelSpec = std::variant<PlsSpec, MlpSpec>;

std::string model_label(const ModelSpec& spec);

/// One grid cell: preprocessing, feature threshold, model.
struct PipelineConfig {
    PreprocessConfig preprocess{};
    double threshold_percent = 100.0;
    ModelSpec model = PlsSpec{};

    std::string label() const;
    nlohmann::json to_json() const;
};

/// Everything fitted on one fold: preprocessing context, retained columns,
/// and the trained model. Fitting statistics come from the training subset
/// only (MSC reference, feature ranking, scalers); validation is used only
/// for MLP early stopping.
struct FittedPipeline {
    PipelineConfig config;
    std::optional<MscReference> msc;
    std::vector<std::size_t> retained;
    std::variant<PlsModel, MlpModel> model;

    std::vector<double> predict_rows(const Matrix& preprocessed,
                                     const std::vector<std::size_t>& rows) const;
    /// Canonical bytes of the fitted state (leakage audits compare these).
    std::string serialize() const;
};

enum class Subset { Train = 0, Validation = 1, Test = 2 };
const char* subset_name(Subset s);

struct CvRecord {
    int repetition = 0;
    int fold = 0;
    Subset subset = Subset::Train;
    Metrics metrics{};
};

struct CvCellFailure {
    int repetition = 0;
    int fold = 0;
    std::string message;
};

struct Aggregate {
    double mean = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
    std::size_t count = 0;
};

struct CvReport {
    std::vector<CvRecord> records;       // sorted by (repetition, fold, subset)
    std::vector<CvCellFailure> failures;

    Aggregate aggregate(Subset subset,
                        double Metrics::* field = &Metrics::r_squared) const;
    std::vector<double> collect(Subset subset,
                                double Metrics::* field = &Metrics::r_squared) const;
    void write_csv(const std::filesystem::path& path) const;
    nlohmann::json to_json() const;
};

/// Fits the pipeline on one fold of `data`. `preprocessed` carries the
/// dataset already transformed by cfg.preprocess when the technique needs
/// no per-fold statistics (everything except MSC); pass nullptr to let the
/// function derive what it needs. The model seed comes from the assignment
/// (master seed, repetition, fold), never from cell identity, so every grid
/// cell sees the same partition and initialization stream.
FittedPipeline fit_fold(const SpectraSet& data, const Matrix* preprocessed,
                        const FoldAssignment& fa, const PipelineConfig& cfg,
                        std::uint64_t master_seed);

/// Repeated k-fold evaluation of one pipeline. Cells run in parallel
/// (jobs = 0: all workers) and each owns a seeded stream, so reports are
/// identical for every worker count. Failing cells are recorded, not fatal;
/// a run where every cell failed raises the first error.
CvReport run_repeated_cv(const SpectraSet& data, const SplitPlan& plan,
                         const PipelineConfig& cfg, int jobs = 0);

namespace reference {
/// Serial baseline of run_repeated_cv for equality tests and the bench.
CvReport run_repeated_cv_serial(const SpectraSet& data, const SplitPlan& plan,
                                const PipelineConfig& cfg);
}  // namespace reference

}  // namespace specal
