#pragma once

#include <span>
#include <vector>

#include "specal/matrix.hpp"

#include <nlohmann/json_fwd.hpp>

namespace specal {

/// Single-response partial least squares model fitted by NIPALS.
/// Prediction uses the assembled regression vector:
/// yhat = (x - x_mean) . b + y_mean.
struct PlsModel {
    int n_components = 0;
    std::vector<double> x_mean;
    double y_mean = 0.0;
    Matrix weights;    // p x k
    Matrix loadings;   // p x k
    std::vector<double> y_loadings;       // k
    std::vector<double> regression;       // p
    bool fitted = false;

    nlohmann::json to_json() const;
    static PlsModel from_json(const nlohmann::json& j);
};

/// NIPALS with deterministic start (no random init): per component
/// w = X'y / |X'y|, t = Xw, p = X't/(t't), q = y't/(t't), then deflation of
/// X and y. Throws RankExhaustedError when X'y vanishes early, reporting
/// how many components were completed.
PlsModel fit_pls(const Matrix& x, std::span<const double> y, int n_components);

std::vector<double> predict_pls(const PlsModel& model, const Matrix& x);

}  // namespace specal
