#include "specal/spectra.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "specal/errors.hpp"
#include "specal/util.hpp"

namespace specal {

void WavelengthAxis::validate() const {
    if (values.empty()) throw DataError("wavelength axis is empty");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1]))
            throw DataError("wavelength axis not strictly increasing at index " +
                            std::to_string(i) + " (" + fmt_double(values[i - 1]) + " -> " +
                            fmt_double(values[i]) + ")");
    }
}

bool WavelengthAxis::uniform_spacing() const {
    if (values.size() < 3) return true;
    const double h0 = values[1] - values[0];
    for (std::size_t i = 2; i < values.size(); ++i) {
        const double h = values[i] - values[i - 1];
        if (std::abs(h - h0) > 1e-9 * std::abs(h0)) return false;
    }
    return true;
}

WavelengthAxis WavelengthAxis::slice(std::size_t first, std::size_t count) const {
    WavelengthAxis out;
    out.values.assign(values.begin() + first, values.begin() + first + count);
    return out;
}

void SpectraSet::validate() const {
    axis.validate();
    if (samples.cols() != axis.size())
        throw DataError("spectra column count " + std::to_string(samples.cols()) +
                        " != axis length " + std::to_string(axis.size()));
    if (samples.rows() != targets.size() || samples.rows() != sample_ids.size())
        throw DataError("row count mismatch between samples, targets and sample_ids");
    for (std::size_t i = 0; i < samples.rows(); ++i)
        for (std::size_t j = 0; j < samples.cols(); ++j)
            if (!std::isfinite(samples(i, j)))
                throw DataError("non-finite value at sample " + std::to_string(i) +
                                ", column " + std::to_string(j));
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (!std::isfinite(targets[i]))
            throw DataError("non-finite target for sample " + std::to_string(i));
}

SpectraSet SpectraSet::take(const std::vector<std::size_t>& idx) const {
    SpectraSet out;
    out.axis = axis;
    out.samples = samples.take_rows(idx);
    out.targets.reserve(idx.size());
    out.sample_ids.reserve(idx.size());
    for (std::size_t i : idx) {
        out.targets.push_back(targets[i]);
        out.sample_ids.push_back(sample_ids[i]);
    }
    return out;
}

namespace {

bool is_comment_or_blank(std::string_view line) {
    auto t = trim(line);
    return t.empty() || t.front() == '#';
}

}  // namespace

SpectraSet load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());

    std::string line;
    std::size_t lineno = 0;

    // header
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_comment_or_blank(line)) continue;
        for (auto tok : split(line, ',')) header.emplace_back(trim(tok));
        break;
    }
    if (header.size() < 3 || header[0] != "sample_id" || header[1] != "target")
        throw DataError(path.string() + ": header must be sample_id,target,<wl_1>,...");

    SpectraSet set;
    for (std::size_t j = 2; j < header.size(); ++j) {
        auto wl = parse_double(header[j]);
        if (!wl)
            throw DataError(path.string() + ": non-numeric wavelength header in column " +
                            std::to_string(j + 1) + ": '" + header[j] + "'");
        set.axis.values.push_back(*wl);
    }
    for (std::size_t j = 1; j < set.axis.values.size(); ++j)
        if (!(set.axis.values[j] > set.axis.values[j - 1]))
            throw DataError(path.string() + ": wavelength headers not strictly increasing at column " +
                            std::to_string(j + 3));

    const std::size_t p = set.axis.size();
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_comment_or_blank(line)) continue;
        auto cells = split(line, ',');
        if (cells.size() != p + 2)
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(p + 2) + " cells, found " + std::to_string(cells.size()));
        set.sample_ids.emplace_back(trim(cells[0]));
        auto tgt = parse_double(cells[1]);
        if (!tgt || !std::isfinite(*tgt))
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": bad target cell '" + std::string(cells[1]) + "'");
        set.targets.push_back(*tgt);
        for (std::size_t j = 0; j < p; ++j) {
            auto v = parse_double(cells[j + 2]);
            if (!v || !std::isfinite(*v))
                throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad cell in column " +
                                std::to_string(j + 3) + " ('" + std::string(cells[j + 2]) + "')");
            values.push_back(*v);
        }
    }
    if (set.sample_ids.empty())
        throw DataError(path.string() + ": no data rows");

    set.samples = Matrix(set.sample_ids.size(), p);
    set.samples.data() = std::move(values);
    set.validate();
    return set;
}

void save_csv(const SpectraSet& set, const std::filesystem::path& path,
              const std::vector<std::string>& comments) {
    set.validate();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "sample_id,target";
    for (double wl : set.axis.values) out << ',' << fmt_double(wl);
    out << "\n";
    for (std::size_t i = 0; i < set.n_samples(); ++i) {
        out << set.sample_ids[i] << ',' << fmt_double(set.targets[i]);
        const double* r = set.samples.row(i);
        for (std::size_t j = 0; j < set.n_wavelengths(); ++j) out << ',' << fmt_double(r[j]);
        out << "\n";
    }
    if (!out) throw DataError("write failed for " + path.string());
}

SpectraSet average_replicates(const SpectraSet& a, const SpectraSet& b) {
    if (a.axis.values != b.axis.values)
        throw DataError("average_replicates: wavelength axes differ");
    if (a.sample_ids != b.sample_ids)
        throw DataError("average_replicates: sample ids differ");
    if (a.targets != b.targets)
        throw DataError("average_replicates: targets differ");
    SpectraSet out = a;
    for (std::size_t i = 0; i < out.samples.rows(); ++i) {
        double* dst = out.samples.row(i);
        const double* src = b.samples.row(i);
        for (std::size_t j = 0; j < out.samples.cols(); ++j)
            dst[j] = 0.5 * (dst[j] + src[j]);
    }
    return out;
}

}  // namespace specal
