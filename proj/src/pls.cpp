#include "specal/pls.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "specal/errors.hpp"

namespace specal {

PlsModel fit_pls(const Matrix& x, std::span<const double> y, int n_components) {
    const std::size_t n = x.rows(), p = x.cols();
    if (n != y.size()) throw DataError("fit_pls: row count != target count");
    if (n < 2) throw DataError("fit_pls needs at least 2 samples");
    const auto k_max = static_cast<int>(std::min(n - 1, p));
    if (n_components < 1 || n_components > k_max)
        throw DataError("fit_pls: n_components must lie in 1.." + std::to_string(k_max) +
                        ", got " + std::to_string(n_components));

    PlsModel m;
    m.n_components = n_components;
    m.x_mean = x.col_means();
    m.y_mean = vec_mean(y);

    Matrix xd(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) xd(i, j) = x(i, j) - m.x_mean[j];
    std::vector<double> yd(n);
    for (std::size_t i = 0; i < n; ++i) yd[i] = y[i] - m.y_mean;

    const std::size_t k = static_cast<std::size_t>(n_components);
    m.weights = Matrix(p, k);
    m.loadings = Matrix(p, k);
    m.y_loadings.assign(k, 0.0);

    std::vector<double> w(p), t(n), pl(p);
    for (std::size_t c = 0; c < k; ++c) {
        // w = X'y, normalized
        for (std::size_t j = 0; j < p; ++j) w[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) axpy(yd[i], xd.row(i), w.data(), p);
        const double wn = std::sqrt(dot(w.data(), w.data(), p));
        if (wn < 1e-12)
            throw RankExhaustedError(
                "fit_pls: residual covariance vanished after " + std::to_string(c) +
                    " of " + std::to_string(k) + " components",
                static_cast<int>(c));
        for (std::size_t j = 0; j < p; ++j) w[j] /= wn;

        for (std::size_t i = 0; i < n; ++i) t[i] = dot(xd.row(i), w.data(), p);
        const double tt = dot(t.data(), t.data(), n);
        if (!(tt > 0.0))
            throw RankExhaustedError(
                "fit_pls: zero score vector after " + std::to_string(c) + " components",
                static_cast<int>(c));

        for (std::size_t j = 0; j < p; ++j) pl[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) axpy(t[i], xd.row(i), pl.data(), p);
        for (std::size_t j = 0; j < p; ++j) pl[j] /= tt;

        double q = 0.0;
        for (std::size_t i = 0; i < n; ++i) q += yd[i] * t[i];
        q /= tt;

        for (std::size_t i = 0; i < n; ++i) axpy(-t[i], pl.data(), xd.row(i), p);
        for (std::size_t i = 0; i < n; ++i) yd[i] -= q * t[i];

        for (std::size_t j = 0; j < p; ++j) {
            m.weights(j, c) = w[j];
            m.loadings(j, c) = pl[j];
        }
        m.y_loadings[c] = q;
    }

    // b = W (P'W)^{-1} q
    Matrix ptw(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            double s = 0.0;
            for (std::size_t j = 0; j < p; ++j) s += m.loadings(j, a) * m.weights(j, b);
            ptw(a, b) = s;
        }
    std::vector<double> z;
    try {
        z = solve_dense(std::move(ptw), m.y_loadings);
    } catch (const NumericError&) {
        throw RankExhaustedError("fit_pls: P'W solve failed (rank exhausted)",
                                 static_cast<int>(k));
    }
    m.regression.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < k; ++c) s += m.weights(j, c) * z[c];
        m.regression[j] = s;
    }
    m.fitted = true;
    return m;
}

std::vector<double> predict_pls(const PlsModel& model, const Matrix& x) {
    if (!model.fitted) throw DataError("predict_pls: model is not fitted");
    if (x.cols() != model.regression.size())
        throw DataError("predict_pls: feature count " + std::to_string(x.cols()) +
                        " != model's " + std::to_string(model.regression.size()));
    std::vector<double> out(x.rows());
    const std::size_t p = x.cols();
    const double offset =
        model.y_mean - dot(model.x_mean.data(), model.regression.data(), p);
    for (std::size_t i = 0; i < x.rows(); ++i)
        out[i] = dot(x.row(i), model.regression.data(), p) + offset;
    return out;
}

nlohmann::json PlsModel::to_json() const {
    nlohmann::json j;
    j["schema"] = "specal.pls/1";
    j["n_components"] = n_components;
    j["x_mean"] = x_mean;
    j["y_mean"] = y_mean;
    j["y_loadings"] = y_loadings;
    j["regression"] = regression;
    j["p"] = x_mean.size();
    auto dump = [&](const Matrix& mtx) { return mtx.data(); };
    j["weights"] = dump(weights);
    j["loadings"] = dump(loadings);
    j["fitted"] = fitted;
    return j;
}

PlsModel PlsModel::from_json(const nlohmann::json& j) {
    if (j.at("schema").get<std::string>() != "specal.pls/1")
        throw DataError("unsupported PLS model schema");
    PlsModel m;
    m.n_components = j.at("n_components").get<int>();
    m.x_mean = j.at("x_mean").get<std::vector<double>>();
    m.y_mean = j.at("y_mean").get<double>();
    m.y_loadings = j.at("y_loadings").get<std::vector<double>>();
    m.regression = j.at("regression").get<std::vector<double>>();
    const auto p = j.at("p").get<std::size_t>();
    const auto k = static_cast<std::size_t>(m.n_components);
    m.weights = Matrix(p, k);
    m.weights.data() = j.at("weights").get<std::vector<double>>();
    m.loadings = Matrix(p, k);
    m.loadings.data() = j.at("loadings").get<std::vector<double>>();
    m.fitted = j.at("fitted").get<bool>();
    return m;
}

}  // namespace specal
