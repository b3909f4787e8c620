#include "specal/specfun.hpp"

#include <cmath>

#include "specal/errors.hpp"

namespace specal {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) * 0.3989422804014326779; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

namespace {

/// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-15;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw NumericError("incomplete beta continued fraction did not converge");
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw NumericError("reg_inc_beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double f_sf(double f, double d1, double d2) {
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    return reg_inc_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    const int m = (n + 1) / 2;
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        nodes[i] = xm - xl * z;
        nodes[n - 1 - i] = xm + xl * z;
        weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

namespace {

/// P(range of k iid standard normals <= w).
double normal_range_cdf(double w, int k, const std::vector<double>& nodes,
                        const std::vector<double>& weights) {
    if (w <= 0.0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double z = nodes[i];
        const double inner = normal_cdf(z) - normal_cdf(z - w);
        if (inner <= 0.0) continue;
        sum += weights[i] * normal_pdf(z) * std::pow(inner, k - 1);
    }
    return std::min(1.0, k * sum);
}

}  // namespace

double studentized_range_cdf(double q, int k, double nu) {
    if (k < 2) throw NumericError("studentized range needs k >= 2");
    if (nu < 1.0) throw NumericError("studentized range needs nu >= 1");
    if (q <= 0.0) return 0.0;

    // Inner z grid spans the support of phi(z)*[Phi(z)-Phi(z-w)]^{k-1}; w can
    // push mass right, so extend the upper end with q (bounded for sanity).
    const double zhi = 8.0 + std::min(q * std::max(1.0, 3.0 / std::sqrt(nu)), 60.0);
    const int inner_n = std::min(512, 128 + static_cast<int>(8.0 * zhi));
    std::vector<double> zn, zw;
    gauss_legendre(inner_n, -8.0, zhi, zn, zw);

    if (nu > 1e5)  // effectively known variance
        return normal_range_cdf(q, k, zn, zw);

    // Outer integral over s ~ sqrt(chi^2_nu / nu): density
    // f(s) = 2 (nu/2)^{nu/2} / Gamma(nu/2) * s^{nu-1} exp(-nu s^2 / 2).
    const double ln_norm =
        std::log(2.0) + 0.5 * nu * std::log(nu / 2.0) - std::lgamma(nu / 2.0);
    const double spread = 6.0 / std::sqrt(std::max(nu, 2.0));
    const double slo = std::max(1e-10, 1.0 - spread > 0.0 ? 1.0 - spread : 1e-10);
    const double shi = 1.0 + std::max(spread, 4.0 / std::sqrt(nu)) + 4.0 / nu;
    std::vector<double> sn, sw;
    gauss_legendre(160, slo, shi, sn, sw);

    double total = 0.0;
    for (std::size_t i = 0; i < sn.size(); ++i) {
        const double s = sn[i];
        const double ln_f = ln_norm + (nu - 1.0) * std::log(s) - 0.5 * nu * s * s;
        total += sw[i] * std::exp(ln_f) * normal_range_cdf(q * s, k, zn, zw);
    }
    // Mass of the chi density outside [slo, shi] is below 1e-8 for nu >= 2;
    // for nu = 1 the lower tail matters, so integrate (0, slo] as well.
    if (nu < 2.0) {
        std::vector<double> tn, tw;
        gauss_legendre(160, 1e-12, slo, tn, tw);
        for (std::size_t i = 0; i < tn.size(); ++i) {
            const double s = tn[i];
            const double ln_f = ln_norm + (nu - 1.0) * std::log(s) - 0.5 * nu * s * s;
            total += tw[i] * std::exp(ln_f) * normal_range_cdf(q * s, k, zn, zw);
        }
    }
    return std::min(1.0, total);
}

double studentized_range_quantile(double p, int k, double nu) {
    if (!(p > 0.0 && p < 1.0)) throw NumericError("quantile level must lie in (0,1)");
    double lo = 1e-6, hi = 2.0;
    while (studentized_range_cdf(hi, k, nu) < p) {
        hi *= 2.0;
        if (hi > 1e4) throw NumericError("studentized range quantile out of range");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (studentized_range_cdf(mid, k, nu) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-9) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace specal
