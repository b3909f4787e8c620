#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "specal/cv.hpp"
#include "specal/tukey.hpp"

#include <nlohmann/json_fwd.hpp>

namespace specal {

/// Axes of the grid-search phases. Desk-scale defaults keep the full
/// protocol affordable on a laptop; paper_scale() switches every axis to
/// the published sweep ranges.
struct GridSpec {
    std::vector<Technique> techniques{Technique::Raw,  Technique::SavGol,
                                      Technique::BeerLambert, Technique::Snv,
                                      Technique::Msc,  Technique::Fsd,
                                      Technique::Ssd};
    SavGolParams phase1_savgol{5, 2, 2};  // initial window for the technique axis
    std::vector<double> phase1_thresholds{20, 60, 100};
    std::vector<double> phase3_thresholds{4,  8,  12, 16, 20, 24, 28, 32, 36,
                                          40, 44, 48, 52, 56, 60, 64, 68, 72,
                                          76, 80, 84, 88, 92, 96, 100};
    std::vector<int> savgol_widths{9, 17, 33};
    std::vector<int> savgol_poly_orders{1, 2, 3, 4, 5};
    std::vector<int> savgol_deriv_orders{1, 2, 3, 4, 5};  // pairs with d <= p
    std::vector<MlpArchitecture> architectures{{{10}}, {{20}}, {{50}}, {{180, 10}}};
    int pls_components = 10;
    MlpArchitecture phase1_architecture{{10}};
    TrainConfig mlp_train{};  // tuning budget; see make_desk_grid
    int n_repetitions = 5;
    int n_folds = 10;
    double validation_fraction = 2.0 / 9.0;
    std::uint64_t master_seed = kDefaultSeed;
    double tukey_alpha = 0.01;

    SplitPlan plan() const;
    void validate() const;
};

/// Desk-scale grid: 5 x 10-fold CV, reduced threshold/width/architecture
/// axes, 150-epoch training budget.
GridSpec make_desk_grid(std::uint64_t seed = kDefaultSeed);

/// Paper-scale sweep: 50 repetitions, thresholds 10..100 (phase 1) and
/// 1..100 (phase 3), widths odd 3..101, one/two hidden layers 0..200
/// step 10.
GridSpec make_paper_grid(std::uint64_t seed = kDefaultSeed);

/// One evaluated grid cell: configuration plus the validation-R^2 spread.
struct CellSummary {
    PipelineConfig config;
    Aggregate validation_r2;
    std::vector<double> validation_samples;  // one value per CV cell
    std::size_t failures = 0;

    bool ok() const { return validation_r2.count > 0; }
};

struct PhaseResult {
    std::string phase;
    std::vector<CellSummary> cells;
    std::size_t winner_index = 0;
    std::optional<TukeyResult> tukey;

    const CellSummary& winner() const { return cells[winner_index]; }
    void write_csv(const std::filesystem::path& path) const;
    void write_winner_json(const std::filesystem::path& path) const;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Phase 1: {PLS, MLP} x techniques x thresholds; winner is the cell with
/// the best mean validation R^2.
PhaseResult phase1(const SpectraSet& data, const GridSpec& grid, int jobs = 0,
                   const ProgressFn& progress = {});

/// Savitzky-Golay parameter search at threshold 100%: per (poly, deriv)
/// pair the best width by mean validation R^2 is kept, then the pairs are
/// compared by Tukey HSD. Winner: within the best pair's letter group,
/// greatest mean then smallest std.
PhaseResult savgol_search(const SpectraSet& data, const GridSpec& grid, int jobs = 0,
                          const ProgressFn& progress = {});

/// Phase 2: architecture sweep at threshold 100% under `prep`. Winner is
/// the least complex architecture statistically tied with the best (total
/// neurons, then layer count, then lexicographic order).
PhaseResult phase2(const SpectraSet& data, const GridSpec& grid, const PreprocessConfig& prep,
                   int jobs = 0, const ProgressFn& progress = {});

/// Phase 3: threshold sweep with everything else fixed. Winner is the
/// smallest threshold whose mean validation R^2 is within one standard
/// deviation of the best cell's mean.
PhaseResult phase3(const SpectraSet& data, const GridSpec& grid, const PreprocessConfig& prep,
                   const MlpArchitecture& arch, int jobs = 0, const ProgressFn& progress = {});

/// Pure winner rules, exposed for direct testing.
std::size_t pick_phase2_winner(const std::vector<CellSummary>& cells, const TukeyResult& tukey);
std::size_t pick_phase3_winner(const std::vector<CellSummary>& cells);

/// Table-style text report of a savgol_search result.
std::string format_savgol_table(const PhaseResult& result);

/// Final evaluation: repeated CV under the full configuration; per-subset
/// aggregate metrics plus one representative fitted pipeline (the cell with
/// the best test R^2), serialized to JSON.
struct FinalReport {
    PipelineConfig config;
    CvReport cv;
    struct SubsetRow {
        std::string subset;
        std::size_t n = 0;  // per-fold subset size
        Aggregate r2, mae, rmse, f;
        double median_p = 1.0;
    };
    std::vector<SubsetRow> rows;
    std::string model_json;  // representative fitted pipeline
    int model_repetition = 0, model_fold = 0;
    std::vector<double> rep_actual, rep_predicted;  // representative test fold

    std::string format_table() const;
    nlohmann::json to_json() const;
};

FinalReport finalize(const SpectraSet& data, const SplitPlan& plan, const PipelineConfig& cfg,
                     int jobs = 0);

}  // namespace specal
