#include "specal/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "specal/errors.hpp"
#include "specal/matrix.hpp"
#include "specal/specfun.hpp"

namespace specal {

namespace {

void check_lengths(std::span<const double> y, std::span<const double> yhat,
                   std::size_t min_n) {
    if (y.size() != yhat.size())
        throw DataError("metric inputs differ in length (" + std::to_string(y.size()) + " vs " +
                        std::to_string(yhat.size()) + ")");
    if (y.size() < min_n)
        throw DataError("metric needs at least " + std::to_string(min_n) + " observations");
}

}  // namespace

double r_squared(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat, 2);
    const double my = vec_mean(y);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    if (!(ss_tot > 0.0)) throw DataError("r_squared: degenerate (constant) target");
    return 1.0 - ss_res / ss_tot;
}

double mae(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat, 1);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(y[i] - yhat[i]);
    return s / static_cast<double>(y.size());
}

double rmse(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat, 1);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    return std::sqrt(s / static_cast<double>(y.size()));
}

namespace {

/// Shared regression decomposition. Returns false when the predictions are
/// constant (slope undefined); *perfect set when residuals vanish.
bool f_decompose(std::span<const double> y, std::span<const double> yhat, double* f_out,
                 bool* perfect) {
    const std::size_t n = y.size();
    const double my = vec_mean(y), mh = vec_mean(yhat);
    double shh = 0.0, shy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        shh += (yhat[i] - mh) * (yhat[i] - mh);
        shy += (yhat[i] - mh) * (y[i] - my);
    }
    if (!(shh > 0.0)) return false;
    const double slope = shy / shh;
    const double intercept = my - slope * mh;
    double ss_reg = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = intercept + slope * yhat[i];
        ss_reg += (fit - my) * (fit - my);
        ss_res += (y[i] - fit) * (y[i] - fit);
    }
    const double ms_res = ss_res / static_cast<double>(n - 2);
    *perfect = !(ms_res > 0.0);
    *f_out = *perfect ? std::numeric_limits<double>::infinity() : ss_reg / ms_res;
    return true;
}

}  // namespace

FTest f_vs_constant(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat, 3);
    double f = 0.0;
    bool perfect = false;
    if (!f_decompose(y, yhat, &f, &perfect))
        throw DataError("f_vs_constant: constant predictions");
    if (perfect) throw DataError("f_vs_constant: zero residual variance");
    return {f, f_sf(f, 1.0, static_cast<double>(y.size() - 2))};
}

Metrics compute_metrics(std::span<const double> y, std::span<const double> yhat) {
    Metrics m;
    m.n = y.size();
    m.r_squared = r_squared(y, yhat);
    m.mae = mae(y, yhat);
    m.rmse = rmse(y, yhat);
    if (y.size() >= 3) {
        double f = 0.0;
        bool perfect = false;
        if (!f_decompose(y, yhat, &f, &perfect)) {
            m.f_statistic = 0.0;
            m.p_value = 1.0;
        } else {
            m.f_statistic = f;
            m.p_value = perfect ? 0.0 : f_sf(f, 1.0, static_cast<double>(y.size() - 2));
        }
    }
    return m;
}

}  // namespace specal
