#pragma once

// Independent test oracles. These deliberately use different algorithms
// than the library (Householder QR instead of normal equations, two-pass
// covariance sums, textbook ridge) so agreement is meaningful.

#include <functional>
#include <span>
#include <vector>

#include "specal/matrix.hpp"

namespace oracles {

/// Least squares via Householder QR; a is n x m with n >= m.
std::vector<double> qr_least_squares(const specal::Matrix& a, std::vector<double> b);

/// d-th derivative at the window centre from a QR polynomial fit of the
/// window values (unit spacing, degree `poly`).
double savgol_window_oracle(std::span<const double> window, int poly, int deriv);

struct LinReg {
    double intercept = 0.0, slope = 0.0;
};
LinReg simple_linreg(std::span<const double> x, std::span<const double> y);

/// Two-pass Pearson correlation.
double pearson(std::span<const double> a, std::span<const double> b);

/// Ridge regression on centred data; returns in-sample R^2.
double ridge_r2(const specal::Matrix& x, std::span<const double> y, double lambda);

/// Central finite differences of f around x0 with step h.
double central_diff(const std::function<double(double)>& f, double x0, double h);

}  // namespace oracles
