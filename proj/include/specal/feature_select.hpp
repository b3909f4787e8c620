#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "specal/matrix.hpp"
#include "specal/spectra.hpp"

namespace specal {

/// Per-column absolute Pearson correlations with the target plus the
/// ranking order (descending |r|, ties by ascending column index).
/// Zero-variance columns score 0 and are flagged.
struct FeatureRanking {
    std::vector<double> scores;
    std::vector<std::size_t> order;
    std::vector<std::uint8_t> zero_variance;
};

FeatureRanking rank_by_correlation(const Matrix& x, std::span<const double> y, int jobs = 0);

struct ThresholdSelection {
    double threshold_percent = 100.0;
    std::vector<std::size_t> retained;  // ascending
};

/// Keeps the top ceil(T/100 * p) columns of the ranking (at least one).
ThresholdSelection select_threshold(const FeatureRanking& ranking, double threshold_percent);

/// `wavelength_nm,abs_r,rank` rows sorted by rank.
void write_ranking_csv(const std::filesystem::path& path, const WavelengthAxis& axis,
                       const FeatureRanking& ranking);

namespace reference {
/// Serial baseline for the parallel ranking kernel.
FeatureRanking rank_by_correlation_serial(const Matrix& x, std::span<const double> y);
}  // namespace reference

}  // namespace specal
