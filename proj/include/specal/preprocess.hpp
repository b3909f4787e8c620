#pragma once

#include <span>
#include <string>
#include <vector>

#include "specal/spectra.hpp"

#include <nlohmann/json_fwd.hpp>

namespace specal {

/// Savitzky-Golay window parameters. Derivatives are taken with respect to
/// the point index (unit spacing); callers on a physical axis must hold a
/// uniform grid.
struct SavGolParams {
    int width = 5;        // odd, 3..101
    int poly_order = 2;   // 1..5, < width
    int deriv_order = 2;  // 1..poly_order

    void validate() const;
    bool operator==(const SavGolParams&) const = default;
};

/// The seven techniques, numbered as usually listed: raw spectra first,
/// then Savitzky-Golay, absorbance, SNV, MSC and the two finite-difference
/// derivatives.
enum class Technique {
    Raw = 1,
    SavGol = 2,
    BeerLambert = 3,
    Snv = 4,
    Msc = 5,
    Fsd = 6,
    Ssd = 7,
};

const char* technique_name(Technique t);

struct PreprocessConfig {
    Technique technique = Technique::Raw;
    SavGolParams savgol{};  // meaningful only for Technique::SavGol

    void validate() const;
    std::string label() const;
    bool operator==(const PreprocessConfig&) const = default;

    nlohmann::json to_json() const;
    static PreprocessConfig from_json(const nlohmann::json& j);
    /// Parses CLI-style specs: raw | savgol:w,p,d | beer | snv | msc | fsd | ssd.
    static PreprocessConfig parse(const std::string& spec);
};

/// Reference spectrum for multiplicative scatter correction.
struct MscReference {
    enum class Source { CalibrationMean, Explicit };
    std::vector<double> values;
    Source source = Source::CalibrationMean;
};

/// Convolution weights c for params (w,p,d): for any window y of w points
/// at unit spacing, dot(c, y) is the d-th derivative at the window centre
/// of the least-squares degree-p polynomial fit of y.
std::vector<double> savgol_coefficients(const SavGolParams& params);

/// Sliding application of savgol_coefficients over a spectrum; only
/// centre-valid points are emitted, so the output has m - w + 1 points.
std::vector<double> savitzky_golay(std::span<const double> x, const SavGolParams& params);

/// A = -log10(R), element-wise. Any R <= 0 raises a domain error naming the
/// offending point.
std::vector<double> beer_lambert(std::span<const double> reflectance);

/// (x - mean) / sample std. Constant spectra are rejected.
std::vector<double> snv(std::span<const double> x);

/// Column-wise mean of the calibration spectra.
MscReference msc_fit(const Matrix& calibration);
MscReference msc_fit(const SpectraSet& calibration);

/// Regresses x on the reference (with intercept) and inverts the fit:
/// (x - intercept) / slope.
std::vector<double> msc_correct(std::span<const double> x, const MscReference& ref);

/// First forward difference, x[i] - x[i-1]; drops the first point.
std::vector<double> fsd(std::span<const double> x);
/// Second difference (fsd twice); drops the first two points.
std::vector<double> ssd(std::span<const double> x);

/// Applies `cfg` to every sample, in parallel over rows (jobs = 0 uses all
/// workers; row outputs are independent, so results do not depend on the
/// worker count). MSC requires `ref` fitted on calibration data. The output
/// axis reflects any edge points dropped by the transform.
SpectraSet apply(const PreprocessConfig& cfg, const SpectraSet& x,
                 const MscReference* ref = nullptr, int jobs = 0);

/// Matrix-level core of apply(); `axis_offset` receives the number of
/// leading axis points dropped.
Matrix apply_matrix(const PreprocessConfig& cfg, const Matrix& x, const MscReference* ref,
                    int jobs, std::size_t* axis_offset = nullptr);

/// Output length of a transform for an input of length p.
std::size_t transformed_length(const PreprocessConfig& cfg, std::size_t p);

namespace reference {
/// Plain-loop batch application kept as the comparison baseline for the
/// parallel kernel (tests assert bit equality; the bench target times both).
Matrix apply_matrix_serial(const PreprocessConfig& cfg, const Matrix& x, const MscReference* ref);
}  // namespace reference

}  // namespace specal
