#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

using specal::Matrix;

std::vector<double> qr_least_squares(const Matrix& a_in, std::vector<double> b) {
    Matrix a = a_in;
    const std::size_t n = a.rows(), m = a.cols();
    if (b.size() != n || n < m) throw std::runtime_error("qr_least_squares: bad shapes");

    for (std::size_t k = 0; k < m; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) throw std::runtime_error("qr_least_squares: rank deficient");
        if (a(k, k) > 0) norm = -norm;
        std::vector<double> v(n - k);
        v[0] = a(k, k) - norm;
        for (std::size_t i = k + 1; i < n; ++i) v[i - k] = a(i, k);
        double vtv = 0.0;
        for (double x : v) vtv += x * x;
        if (vtv == 0.0) continue;
        // apply H = I - 2 v v^T / (v^T v) to the trailing block and to b
        for (std::size_t j = k; j < m; ++j) {
            double dotv = 0.0;
            for (std::size_t i = k; i < n; ++i) dotv += v[i - k] * a(i, j);
            const double f = 2.0 * dotv / vtv;
            for (std::size_t i = k; i < n; ++i) a(i, j) -= f * v[i - k];
        }
        double dotb = 0.0;
        for (std::size_t i = k; i < n; ++i) dotb += v[i - k] * b[i];
        const double fb = 2.0 * dotb / vtv;
        for (std::size_t i = k; i < n; ++i) b[i] -= fb * v[i - k];
    }
    std::vector<double> x(m, 0.0);
    for (std::size_t i = m; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < m; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

double savgol_window_oracle(std::span<const double> window, int poly, int deriv) {
    const std::size_t w = window.size();
    const int half = static_cast<int>(w) / 2;
    Matrix a(w, poly + 1);
    for (std::size_t i = 0; i < w; ++i) {
        const double t = static_cast<double>(static_cast<int>(i) - half);
        double tp = 1.0;
        for (int j = 0; j <= poly; ++j) {
            a(i, j) = tp;
            tp *= t;
        }
    }
    const auto coef = qr_least_squares(a, std::vector<double>(window.begin(), window.end()));
    double dfact = 1.0;
    for (int i = 2; i <= deriv; ++i) dfact *= i;
    return dfact * coef[deriv];
}

LinReg simple_linreg(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinReg r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    return r;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

double ridge_r2(const Matrix& x, std::span<const double> y, double lambda) {
    const std::size_t n = x.rows(), p = x.cols();
    double my = 0.0;
    for (double v : y) my += v;
    my /= n;

    Matrix g(p, p);
    std::vector<double> rhs(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = x.row(i);
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = a; b < p; ++b) g(a, b) += r[a] * r[b];
            rhs[a] += r[a] * (y[i] - my);
        }
    }
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < a; ++b) g(a, b) = g(b, a);
        g(a, a) += lambda;
    }
    const auto beta = specal::solve_dense(std::move(g), std::move(rhs));

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = specal::dot(x.row(i), beta.data(), p) + my;
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    return 1.0 - ss_res / ss_tot;
}

double central_diff(const std::function<double(double)>& f, double x0, double h) {
    return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
}

}  // namespace oracles
