#include "specal/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "specal/errors.hpp"
#include "specal/parallel.hpp"
#include "specal/util.hpp"

namespace specal {

namespace {

/// |Pearson r| of one column against centred targets. yc holds y - mean(y),
/// syy its sum of squares.
double abs_corr_col(const Matrix& x, std::size_t j, const std::vector<double>& yc, double syy,
                    bool* zero_var) {
    const std::size_t n = x.rows();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
    mean /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x(i, j) - mean;
        sxx += d * d;
        sxy += d * yc[i];
    }
    if (!(sxx > 0.0)) {
        *zero_var = true;
        return 0.0;
    }
    *zero_var = false;
    double r = std::abs(sxy / std::sqrt(sxx * syy));
    return std::min(r, 1.0);  // guard rounding just above 1
}

void finish_ranking(FeatureRanking& ranking) {
    ranking.order.resize(ranking.scores.size());
    std::iota(ranking.order.begin(), ranking.order.end(), 0);
    std::stable_sort(ranking.order.begin(), ranking.order.end(),
                     [&](std::size_t a, std::size_t b) {
                         if (ranking.scores[a] != ranking.scores[b])
                             return ranking.scores[a] > ranking.scores[b];
                         return a < b;
                     });
}

void check_inputs(const Matrix& x, std::span<const double> y) {
    if (x.rows() != y.size())
        throw DataError("rank_by_correlation: row count != target count");
    if (x.rows() < 3) throw DataError("rank_by_correlation needs at least 3 samples");
    const double sy = vec_std(y);
    if (!(sy > 0.0)) throw DataError("rank_by_correlation: degenerate (constant) target");
}

}  // namespace

FeatureRanking rank_by_correlation(const Matrix& x, std::span<const double> y, int jobs) {
    check_inputs(x, y);
    const std::size_t n = x.rows(), p = x.cols();
    const double my = vec_mean(y);
    std::vector<double> yc(n);
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        yc[i] = y[i] - my;
        syy += yc[i] * yc[i];
    }
    FeatureRanking ranking;
    ranking.scores.assign(p, 0.0);
    ranking.zero_variance.assign(p, 0);
    parallel_for(p, jobs, [&](std::size_t j) {
        bool zv = false;
        ranking.scores[j] = abs_corr_col(x, j, yc, syy, &zv);
        ranking.zero_variance[j] = zv ? 1 : 0;
    });
    finish_ranking(ranking);
    return ranking;
}

ThresholdSelection select_threshold(const FeatureRanking& ranking, double threshold_percent) {
    if (!(threshold_percent > 0.0) || threshold_percent > 100.0)
        throw DataError("feature threshold must lie in (0, 100], got " +
                        fmt_double(threshold_percent));
    const std::size_t p = ranking.order.size();
    auto keep = static_cast<std::size_t>(
        std::ceil(threshold_percent / 100.0 * static_cast<double>(p)));
    keep = std::max<std::size_t>(1, std::min(keep, p));
    ThresholdSelection sel;
    sel.threshold_percent = threshold_percent;
    sel.retained.assign(ranking.order.begin(), ranking.order.begin() + keep);
    std::sort(sel.retained.begin(), sel.retained.end());
    return sel;
}

void write_ranking_csv(const std::filesystem::path& path, const WavelengthAxis& axis,
                       const FeatureRanking& ranking) {
    if (axis.size() != ranking.scores.size())
        throw DataError("ranking/axis length mismatch");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << "wavelength_nm,abs_r,rank\n";
    for (std::size_t r = 0; r < ranking.order.size(); ++r) {
        const std::size_t j = ranking.order[r];
        out << fmt_double(axis.values[j]) << ',' << fmt_double(ranking.scores[j]) << ','
            << (r + 1) << "\n";
    }
}

namespace reference {

FeatureRanking rank_by_correlation_serial(const Matrix& x, std::span<const double> y) {
    check_inputs(x, y);
    const std::size_t n = x.rows(), p = x.cols();
    const double my = vec_mean(y);
    std::vector<double> yc(n);
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        yc[i] = y[i] - my;
        syy += yc[i] * yc[i];
    }
    FeatureRanking ranking;
    ranking.scores.assign(p, 0.0);
    ranking.zero_variance.assign(p, 0);
    for (std::size_t j = 0; j < p; ++j) {
        bool zv = false;
        ranking.scores[j] = abs_corr_col(x, j, yc, syy, &zv);
        ranking.zero_variance[j] = zv ? 1 : 0;
    }
    finish_ranking(ranking);
    return ranking;
}

}  // namespace reference

}  // namespace specal
