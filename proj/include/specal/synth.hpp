#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "specal/spectra.hpp"

namespace specal {

/// One synthetic absorption band. The centre moves linearly from
/// `center_nm` to `center_nm - drift_nm` over the storage period, the
/// amplitude follows one of the built-in day-coefficient curves, and the
/// band has compact support (truncated Gaussian, cut at 3.5 sigma) so the
/// informative wavelength set is exact.
struct PeakSpec {
    double center_nm = 0.0;
    double drift_nm = 0.0;
    double sigma_nm = 1.0;
    double amplitude = 0.0;
    enum class Curve { SaturatingFold, Oscillation } curve = Curve::SaturatingFold;
};

struct SynthConfig {
    int n_eggs = 30;
    int n_days = 22;
    double axis_start_nm = 740.0;
    double axis_end_nm = 1070.0;
    double axis_step_nm = 1.0;
    /// Requested share of the axis carrying day signal; the default peak
    /// widths are scaled by informative_fraction / 0.2.
    double informative_fraction = 0.2;
    std::vector<PeakSpec> peaks;  // empty -> built-in default set
    double noise_sd = 0.004;
    bool scatter = true;
    double scatter_slope_lo = 0.85, scatter_slope_hi = 1.15;
    double scatter_offset = 0.04;  // additive offset drawn from +-this
    std::uint64_t seed = 7;

    void validate() const;
    std::vector<PeakSpec> effective_peaks() const;
};

struct GroundTruth {
    std::vector<double> day_labels;        // per sample
    Matrix noiseless;                      // n_samples x p, no scatter/noise
    std::vector<std::size_t> informative;  // axis indices carrying day signal
    double informative_fraction = 0.0;     // actual share
};

/// Deterministic synthetic dataset: smooth baseline + drifting compact
/// bands with nonlinear day coefficients + per-sample multiplicative
/// scatter + iid noise, clipped positive. Sample order is egg-major.
std::pair<SpectraSet, GroundTruth> generate(const SynthConfig& cfg);

/// Writes `spectra.csv` (standard CSV format) and `truth.json` into `dir`.
void save_fixture(const SpectraSet& set, const GroundTruth& truth,
                  const std::filesystem::path& dir);

}  // namespace specal
