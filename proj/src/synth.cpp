#include "specal/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "specal/errors.hpp"
#include "specal/rng.hpp"
#include "specal/util.hpp"

namespace specal {

namespace {

constexpr double kBumpCut = 3.5;     // support radius in sigmas
constexpr double kCurveArc = 1.7 * M_PI;

/// Truncated Gaussian bump: continuous, exactly zero outside the cut.
double bump(double t) {
    if (std::abs(t) >= kBumpCut) return 0.0;
    const double e0 = std::exp(-0.5 * kBumpCut * kBumpCut);
    return (std::exp(-0.5 * t * t) - e0) / (1.0 - e0);
}

/// Day coefficients drawn from a trigonometric arc so the day signal is
/// saturating and genuinely nonlinear (a linear readout cannot reduce it
/// to the day index), while staying jointly invertible.
double curve_value(PeakSpec::Curve c, double u) {
    switch (c) {
        case PeakSpec::Curve::SaturatingFold: return 0.5 * (1.0 - std::cos(kCurveArc * u));
        case PeakSpec::Curve::Oscillation: return std::sin(kCurveArc * u);
    }
    return 0.0;
}

double baseline(double lam, double lam0, double span) {
    const double t = (lam - lam0) / span;
    return 0.52 + 0.10 * t - 0.06 * t * t;
}

}  // namespace

void SynthConfig::validate() const {
    if (n_eggs < 1 || n_days < 1) throw DataError("synth: n_eggs and n_days must be positive");
    if (!(axis_step_nm > 0.0) || !(axis_end_nm > axis_start_nm))
        throw DataError("synth: bad axis definition");
    if (noise_sd < 0.0) throw DataError("synth: noise_sd must be non-negative");
    if (!(informative_fraction > 0.0 && informative_fraction <= 1.0))
        throw DataError("synth: informative_fraction must lie in (0,1]");
    for (const auto& pk : effective_peaks()) {
        if (pk.center_nm - pk.drift_nm < axis_start_nm || pk.center_nm > axis_end_nm ||
            pk.center_nm < axis_start_nm)
            throw DataError("synth: peak path leaves the wavelength axis");
        if (!(pk.sigma_nm > 0.0)) throw DataError("synth: peak sigma must be positive");
    }
}

std::vector<PeakSpec> SynthConfig::effective_peaks() const {
    if (!peaks.empty()) return peaks;
    // Default set: one drifting band plus two fixed bands. Widths sized so
    // the union of supports covers ~20% of the nominal axis at fraction 0.2.
    const double ws = informative_fraction / 0.2;
    return {
        {933.0, 14.0, 3.0 * ws, 0.065, PeakSpec::Curve::SaturatingFold},
        {866.0, 0.0, 2.2 * ws, 0.050, PeakSpec::Curve::Oscillation},
        {991.0, 0.0, 2.2 * ws, 0.045, PeakSpec::Curve::SaturatingFold},
    };
}

std::pair<SpectraSet, GroundTruth> generate(const SynthConfig& cfg) {
    cfg.validate();
    const auto peaks = cfg.effective_peaks();

    WavelengthAxis axis;
    for (double lam = cfg.axis_start_nm; lam <= cfg.axis_end_nm + 1e-9; lam += cfg.axis_step_nm)
        axis.values.push_back(lam);
    const std::size_t p = axis.size();
    const double span = cfg.axis_end_nm - cfg.axis_start_nm;

    // noiseless day spectra
    const int days = cfg.n_days;
    Matrix day_spec(days, p);
    for (int d = 0; d < days; ++d) {
        const double u = days > 1 ? static_cast<double>(d) / (days - 1) : 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            double s = baseline(axis.values[j], cfg.axis_start_nm, span);
            for (const auto& pk : peaks) {
                const double center = pk.center_nm - pk.drift_nm * u;
                s += pk.amplitude * curve_value(pk.curve, u) *
                     bump((axis.values[j] - center) / pk.sigma_nm);
            }
            day_spec(d, j) = s;
        }
    }

    // informative set: union of band supports along the drift path
    std::vector<std::uint8_t> informative(p, 0);
    for (const auto& pk : peaks) {
        const double lo = pk.center_nm - pk.drift_nm - kBumpCut * pk.sigma_nm;
        const double hi = pk.center_nm + kBumpCut * pk.sigma_nm;
        for (std::size_t j = 0; j < p; ++j)
            if (axis.values[j] > lo && axis.values[j] < hi) informative[j] = 1;
    }

    const std::size_t n = static_cast<std::size_t>(cfg.n_eggs) * days;
    SpectraSet set;
    set.axis = axis;
    set.samples = Matrix(n, p);
    set.targets.resize(n);
    set.sample_ids.resize(n);

    GroundTruth truth;
    truth.day_labels.resize(n);
    truth.noiseless = Matrix(n, p);
    for (std::size_t j = 0; j < p; ++j)
        if (informative[j]) truth.informative.push_back(j);
    truth.informative_fraction =
        static_cast<double>(truth.informative.size()) / static_cast<double>(p);

    std::size_t row = 0;
    for (int egg = 0; egg < cfg.n_eggs; ++egg) {
        for (int d = 0; d < days; ++d, ++row) {
            // per-sample stream so parallel generation stays reproducible
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(egg),
                                static_cast<std::uint64_t>(d)));
            const double slope =
                cfg.scatter ? rng.uniform(cfg.scatter_slope_lo, cfg.scatter_slope_hi) : 1.0;
            const double offset =
                cfg.scatter ? rng.uniform(-cfg.scatter_offset, cfg.scatter_offset) : 0.0;
            double* dst = set.samples.row(row);
            double* clean = truth.noiseless.row(row);
            for (std::size_t j = 0; j < p; ++j) {
                clean[j] = day_spec(d, j);
                double v = slope * clean[j] + offset;
                if (cfg.noise_sd > 0.0) v += rng.normal(0.0, cfg.noise_sd);
                dst[j] = std::max(v, 1e-4);  // keep reflectance positive
            }
            set.targets[row] = static_cast<double>(d);
            truth.day_labels[row] = static_cast<double>(d);
            char id[32];
            std::snprintf(id, sizeof id, "egg%02d_day%02d", egg, d);
            set.sample_ids[row] = id;
        }
    }
    set.validate();
    return {std::move(set), std::move(truth)};
}

void save_fixture(const SpectraSet& set, const GroundTruth& truth,
                  const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_csv(set, dir / "spectra.csv", {"target units: storage days"});

    nlohmann::json j;
    j["schema"] = "specal.truth/1";
    j["day_labels"] = truth.day_labels;
    j["informative_indices"] = truth.informative;
    j["informative_fraction"] = truth.informative_fraction;
    std::ofstream out(dir / "truth.json", std::ios::trunc);
    if (!out) throw DataError("cannot write " + (dir / "truth.json").string());
    out << j.dump(2) << "\n";
}

}  // namespace specal
