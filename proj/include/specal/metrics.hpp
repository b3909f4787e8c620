#pragma once

#include <span>

namespace specal {

/// Fit quality of one prediction vector against its actual values.
struct Metrics {
    double r_squared = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
    std::size_t n = 0;
    double f_statistic = 0.0;
    double p_value = 1.0;
};

/// 1 - SSres/SStot (centred). Constant actual values are rejected.
double r_squared(std::span<const double> y, std::span<const double> yhat);

double mae(std::span<const double> y, std::span<const double> yhat);

/// sqrt(mean squared error), 1/n denominator.
double rmse(std::span<const double> y, std::span<const double> yhat);

/// F statistic and p value of the simple linear regression of y on yhat
/// against the constant model, df (1, n-2). Degenerate inputs (n < 3,
/// constant predictions, zero residual variance) are errors here; the CV
/// pipeline uses compute_metrics, which maps those limits to data.
struct FTest {
    double f = 0.0;
    double p = 1.0;
};
FTest f_vs_constant(std::span<const double> y, std::span<const double> yhat);

/// All metrics at once, with degenerate F limits mapped instead of thrown:
/// perfect fit -> F = +inf, p = 0; constant predictions -> F = 0, p = 1.
Metrics compute_metrics(std::span<const double> y, std::span<const double> yhat);

}  // namespace specal
