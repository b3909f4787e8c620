#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "specal/matrix.hpp"

namespace specal {

/// Strictly increasing wavelength grid in nm.
struct WavelengthAxis {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    /// Throws DataError unless non-empty and strictly increasing.
    void validate() const;
    /// True when point spacing is uniform to 1e-9 relative.
    bool uniform_spacing() const;
    /// Sub-axis [first, first+count).
    WavelengthAxis slice(std::size_t first, std::size_t count) const;
};

/// Immutable-by-convention bundle of spectra, wavelength axis, scalar
/// targets and sample ids. Row i of `samples` belongs to sample_ids[i].
struct SpectraSet {
    WavelengthAxis axis;
    Matrix samples;                        // n_samples x n_wavelengths
    std::vector<double> targets;           // storage days (or any scalar)
    std::vector<std::string> sample_ids;

    std::size_t n_samples() const { return samples.rows(); }
    std::size_t n_wavelengths() const { return samples.cols(); }
    /// Checks the shape/finiteness invariants; throws DataError.
    void validate() const;
    /// Row subset, preserving order of `idx`.
    SpectraSet take(const std::vector<std::size_t>& idx) const;
};

/// Reads the `sample_id,target,<wl_1>,...,<wl_p>` CSV format. Lines whose
/// first non-blank character is '#' are ignored. Errors name the offending
/// row/column.
SpectraSet load_csv(const std::filesystem::path& path);

/// Writes the CSV format above with 17-significant-digit values so a
/// load/save cycle is byte-stable. Extra comment lines go first, each
/// prefixed with "# ".
void save_csv(const SpectraSet& set, const std::filesystem::path& path,
              const std::vector<std::string>& comments = {});

/// Element-wise mean of two replicate measurements. Axes, ids and targets
/// must match exactly.
SpectraSet average_replicates(const SpectraSet& a, const SpectraSet& b);

}  // namespace specal
