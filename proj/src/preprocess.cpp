#include "specal/preprocess.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "specal/errors.hpp"
#include "specal/parallel.hpp"
#include "specal/util.hpp"

namespace specal {

void SavGolParams::validate() const {
    if (width < 3 || width > 101 || width % 2 == 0)
        throw DataError("savgol width must be odd and within 3..101, got " +
                        std::to_string(width));
    if (poly_order < 1 || poly_order > 5)
        throw DataError("savgol polynomial order must lie in 1..5, got " +
                        std::to_string(poly_order));
    if (deriv_order < 1 || deriv_order > poly_order)
        throw DataError("savgol derivative order must lie in 1..poly_order (redundant "
                        "configurations are excluded), got d=" +
                        std::to_string(deriv_order) + " p=" + std::to_string(poly_order));
    if (poly_order >= width)
        throw DataError("savgol polynomial order must be smaller than the window width");
}

const char* technique_name(Technique t) {
    switch (t) {
        case Technique::Raw: return "raw";
        case Technique::SavGol: return "savgol";
        case Technique::BeerLambert: return "beer";
        case Technique::Snv: return "snv";
        case Technique::Msc: return "msc";
        case Technique::Fsd: return "fsd";
        case Technique::Ssd: return "ssd";
    }
    return "?";
}

void PreprocessConfig::validate() const {
    const int t = static_cast<int>(technique);
    if (t < 1 || t > 7) throw DataError("unknown preprocessing technique id " + std::to_string(t));
    if (technique == Technique::SavGol) savgol.validate();
}

std::string PreprocessConfig::label() const {
    if (technique == Technique::SavGol)
        return "savgol:" + std::to_string(savgol.width) + "," + std::to_string(savgol.poly_order) +
               "," + std::to_string(savgol.deriv_order);
    return technique_name(technique);
}

nlohmann::json PreprocessConfig::to_json() const {
    nlohmann::json j;
    j["technique"] = static_cast<int>(technique);
    if (technique == Technique::SavGol)
        j["savgol"] = {{"width", savgol.width},
                       {"poly", savgol.poly_order},
                       {"deriv", savgol.deriv_order}};
    return j;
}

PreprocessConfig PreprocessConfig::from_json(const nlohmann::json& j) {
    PreprocessConfig cfg;
    cfg.technique = static_cast<Technique>(j.at("technique").get<int>());
    if (cfg.technique == Technique::SavGol) {
        const auto& s = j.at("savgol");
        cfg.savgol = {s.at("width").get<int>(), s.at("poly").get<int>(), s.at("deriv").get<int>()};
    }
    cfg.validate();
    return cfg;
}

PreprocessConfig PreprocessConfig::parse(const std::string& spec) {
    PreprocessConfig cfg;
    if (spec == "raw") cfg.technique = Technique::Raw;
    else if (spec == "beer") cfg.technique = Technique::BeerLambert;
    else if (spec == "snv") cfg.technique = Technique::Snv;
    else if (spec == "msc") cfg.technique = Technique::Msc;
    else if (spec == "fsd") cfg.technique = Technique::Fsd;
    else if (spec == "ssd") cfg.technique = Technique::Ssd;
    else if (spec.rfind("savgol:", 0) == 0) {
        cfg.technique = Technique::SavGol;
        auto parts = split(spec.substr(7), ',');
        if (parts.size() != 3)
            throw DataError("savgol spec must be savgol:width,poly,deriv, got '" + spec + "'");
        auto geti = [&](std::string_view s) {
            auto v = parse_double(s);
            if (!v || *v != std::floor(*v))
                throw DataError("bad integer in savgol spec: '" + std::string(s) + "'");
            return static_cast<int>(*v);
        };
        cfg.savgol = {geti(parts[0]), geti(parts[1]), geti(parts[2])};
    } else {
        throw DataError("unknown preprocessing spec '" + spec +
                        "' (expected raw|savgol:w,p,d|beer|snv|msc|fsd|ssd)");
    }
    cfg.validate();
    return cfg;
}

std::vector<double> savgol_coefficients(const SavGolParams& params) {
    params.validate();
    const int w = params.width;
    const int half = w / 2;
    const int terms = params.poly_order + 1;

    // Normal equations of the windowed polynomial fit on t scaled to [-1,1]
    // for conditioning; the scale is undone on the selected coefficient row.
    const double scale = static_cast<double>(half);
    Matrix ata(terms, terms);
    Matrix at(terms, w);  // rows: monomial powers, cols: window offsets
    for (int i = 0; i < w; ++i) {
        const double t = static_cast<double>(i - half) / scale;
        double tp = 1.0;
        for (int j = 0; j < terms; ++j) {
            at(j, i) = tp;
            tp *= t;
        }
    }
    for (int a = 0; a < terms; ++a)
        for (int b = 0; b < terms; ++b)
            ata(a, b) = dot(at.row(a), at.row(b), w);

    // Row d of (A^T A)^{-1} A^T gives the fitted coefficient of t^d as a
    // linear functional of the window values.
    std::vector<double> e(terms, 0.0);
    e[params.deriv_order] = 1.0;
    std::vector<double> z = solve_dense(ata, std::move(e));

    double dfact = 1.0;
    for (int i = 2; i <= params.deriv_order; ++i) dfact *= i;
    const double unscale = dfact / std::pow(scale, params.deriv_order);

    std::vector<double> c(w, 0.0);
    for (int i = 0; i < w; ++i) {
        double s = 0.0;
        for (int j = 0; j < terms; ++j) s += z[j] * at(j, i);
        c[i] = s * unscale;
    }
    return c;
}

std::vector<double> savitzky_golay(std::span<const double> x, const SavGolParams& params) {
    params.validate();
    const std::size_t w = static_cast<std::size_t>(params.width);
    if (x.size() < w)
        throw DataError("savgol window of " + std::to_string(w) + " points exceeds spectrum of " +
                        std::to_string(x.size()));
    const std::vector<double> c = savgol_coefficients(params);
    std::vector<double> out(x.size() - w + 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = dot(x.data() + i, c.data(), w);
    return out;
}

std::vector<double> beer_lambert(std::span<const double> reflectance) {
    std::vector<double> out(reflectance.size());
    for (std::size_t i = 0; i < reflectance.size(); ++i) {
        if (!(reflectance[i] > 0.0))
            throw DataError("beer-lambert: non-positive reflectance " +
                            fmt_double(reflectance[i]) + " at point " + std::to_string(i));
        out[i] = -std::log10(reflectance[i]);
    }
    return out;
}

std::vector<double> snv(std::span<const double> x) {
    if (x.size() < 2) throw DataError("snv needs at least two points");
    const double m = vec_mean(x);
    const double s = vec_std(x);
    if (!(s > 0.0)) throw DataError("snv: degenerate (constant) spectrum");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - m) / s;
    return out;
}

MscReference msc_fit(const Matrix& calibration) {
    if (calibration.rows() < 2)
        throw DataError("msc_fit needs at least 2 calibration spectra, got " +
                        std::to_string(calibration.rows()));
    MscReference ref;
    ref.values = calibration.col_means();
    ref.source = MscReference::Source::CalibrationMean;
    return ref;
}

MscReference msc_fit(const SpectraSet& calibration) { return msc_fit(calibration.samples); }

std::vector<double> msc_correct(std::span<const double> x, const MscReference& ref) {
    if (x.size() != ref.values.size())
        throw DataError("msc_correct: spectrum length " + std::to_string(x.size()) +
                        " != reference length " + std::to_string(ref.values.size()));
    const std::size_t p = x.size();
    const double mr = vec_mean(ref.values);
    const double mx = vec_mean(x);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        const double dr = ref.values[i] - mr;
        sxy += dr * (x[i] - mx);
        sxx += dr * dr;
    }
    if (!(sxx > 0.0)) throw NumericError("msc_correct: zero-variance reference spectrum");
    const double slope = sxy / sxx;
    if (std::abs(slope) < 1e-12)
        throw NumericError("msc_correct: fitted slope " + fmt_double(slope) +
                           " is not invertible");
    const double intercept = mx - slope * mr;
    std::vector<double> out(p);
    for (std::size_t i = 0; i < p; ++i) out[i] = (x[i] - intercept) / slope;
    return out;
}

std::vector<double> fsd(std::span<const double> x) {
    if (x.size() < 2) throw DataError("fsd needs a spectrum of at least 2 points");
    std::vector<double> out(x.size() - 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i + 1] - x[i];
    return out;
}

std::vector<double> ssd(std::span<const double> x) {
    if (x.size() < 3) throw DataError("ssd needs a spectrum of at least 3 points");
    return fsd(fsd(x));
}

std::size_t transformed_length(const PreprocessConfig& cfg, std::size_t p) {
    switch (cfg.technique) {
        case Technique::SavGol: return p - static_cast<std::size_t>(cfg.savgol.width) + 1;
        case Technique::Fsd: return p - 1;
        case Technique::Ssd: return p - 2;
        default: return p;
    }
}

namespace {

std::size_t leading_drop(const PreprocessConfig& cfg) {
    switch (cfg.technique) {
        case Technique::SavGol: return static_cast<std::size_t>(cfg.savgol.width / 2);
        case Technique::Fsd: return 1;
        case Technique::Ssd: return 2;
        default: return 0;
    }
}

std::vector<double> transform_row(const PreprocessConfig& cfg, std::span<const double> x,
                                  const MscReference* ref, const std::vector<double>& sg_coeffs) {
    switch (cfg.technique) {
        case Technique::Raw: return std::vector<double>(x.begin(), x.end());
        case Technique::SavGol: {
            const std::size_t w = sg_coeffs.size();
            std::vector<double> out(x.size() - w + 1);
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = dot(x.data() + i, sg_coeffs.data(), w);
            return out;
        }
        case Technique::BeerLambert: return beer_lambert(x);
        case Technique::Snv: return snv(x);
        case Technique::Msc: return msc_correct(x, *ref);
        case Technique::Fsd: return fsd(x);
        case Technique::Ssd: return ssd(x);
    }
    throw DataError("unknown technique");
}

}  // namespace

Matrix apply_matrix(const PreprocessConfig& cfg, const Matrix& x, const MscReference* ref,
                    int jobs, std::size_t* axis_offset) {
    cfg.validate();
    if (x.rows() == 0) throw DataError("preprocess: empty input");
    if (cfg.technique == Technique::Msc && ref == nullptr)
        throw DataError("msc requires a reference fitted on calibration data");
    if (cfg.technique == Technique::SavGol &&
        x.cols() < static_cast<std::size_t>(cfg.savgol.width))
        throw DataError("savgol window of " + std::to_string(cfg.savgol.width) +
                        " points exceeds spectrum of " + std::to_string(x.cols()));
    if ((cfg.technique == Technique::Fsd && x.cols() < 2) ||
        (cfg.technique == Technique::Ssd && x.cols() < 3))
        throw DataError("spectrum too short for finite differences");

    std::vector<double> sg;
    if (cfg.technique == Technique::SavGol) sg = savgol_coefficients(cfg.savgol);

    Matrix out(x.rows(), transformed_length(cfg, x.cols()));
    std::string first_error;
    parallel_for(x.rows(), jobs, [&](std::size_t i) {
        try {
            std::vector<double> row = transform_row(cfg, x.row_span(i), ref, sg);
            double* dst = out.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) dst[j] = row[j];
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical(specal_preprocess_error)
#endif
            {
                if (first_error.empty())
                    first_error = "sample " + std::to_string(i) + ": " + e.what();
            }
        }
    });
    if (!first_error.empty()) throw DataError("preprocess failed: " + first_error);
    if (axis_offset) *axis_offset = leading_drop(cfg);
    return out;
}

SpectraSet apply(const PreprocessConfig& cfg, const SpectraSet& x, const MscReference* ref,
                 int jobs) {
    if (cfg.technique == Technique::SavGol && !x.axis.uniform_spacing())
        throw DataError("savgol derivative is per index point and requires a uniformly "
                        "spaced wavelength axis");
    std::size_t offset = 0;
    SpectraSet out;
    out.samples = apply_matrix(cfg, x.samples, ref, jobs, &offset);
    out.axis = x.axis.slice(offset, out.samples.cols());
    out.targets = x.targets;
    out.sample_ids = x.sample_ids;
    return out;
}

namespace reference {

Matrix apply_matrix_serial(const PreprocessConfig& cfg, const Matrix& x,
                           const MscReference* ref) {
    cfg.validate();
    if (x.rows() == 0) throw DataError("preprocess: empty input");
    if (cfg.technique == Technique::Msc && ref == nullptr)
        throw DataError("msc requires a reference fitted on calibration data");
    std::vector<double> sg;
    if (cfg.technique == Technique::SavGol) sg = savgol_coefficients(cfg.savgol);
    Matrix out(x.rows(), transformed_length(cfg, x.cols()));
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::vector<double> row = transform_row(cfg, x.row_span(i), ref, sg);
        double* dst = out.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) dst[j] = row[j];
    }
    return out;
}

}  // namespace reference

}  // namespace specal
