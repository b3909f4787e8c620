#pragma once

#include <cstddef>
#include <vector>

namespace specal {

double normal_pdf(double z);
double normal_cdf(double z);

/// Regularized incomplete beta I_x(a, b) by the standard continued
/// fraction, accurate to ~1e-14 over the usual statistical range.
double reg_inc_beta(double a, double b, double x);

/// Upper-tail p of an F(d1, d2) statistic.
double f_sf(double f, double d1, double d2);

/// CDF of the studentized range statistic for k groups and nu error
/// degrees of freedom, by two-level Gauss-Legendre quadrature (outer chi
/// integral, inner range probability). Absolute accuracy ~1e-7.
double studentized_range_cdf(double q, int k, double nu);

/// Inverts the CDF at probability level `p` by bisection.
double studentized_range_quantile(double p, int k, double nu);

/// Nodes/weights of n-point Gauss-Legendre on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace specal
