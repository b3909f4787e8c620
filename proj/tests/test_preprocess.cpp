#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "specal/errors.hpp"
#include "specal/preprocess.hpp"
#include "specal/rng.hpp"
#include "specal/synth.hpp"

using namespace specal;

TEST_CASE("savgol_coefficients recovers the second derivative of t^2 exactly") {
    // window [4,1,0,1,4] is t^2 on t=-2..2; its second derivative is 2
    const auto c = savgol_coefficients({5, 2, 2});
    const double window[5] = {4, 1, 0, 1, 4};
    CHECK(dot(window, c.data(), 5) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("savgol_coefficients match the per-window QR least-squares oracle") {
    Rng rng(88);
    for (const auto& [w, p, d] : std::vector<std::tuple<int, int, int>>{
             {5, 2, 2}, {7, 3, 1}, {9, 4, 3}, {21, 5, 5}, {67, 5, 3}, {101, 5, 2}, {3, 2, 1}}) {
        const auto c = savgol_coefficients({w, p, d});
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> window(w);
            for (auto& v : window) v = rng.uniform(0.0, 1.0);
            const double via_conv = dot(window.data(), c.data(), w);
            const double via_oracle = oracles::savgol_window_oracle(window, p, d);
            CHECK(std::abs(via_conv - via_oracle) < 1e-10);
        }
    }
}

TEST_CASE("savgol first derivative of sin matches cos within O(h^2)") {
    // samples of sin(t) at spacing h: per-index derivative is h*cos(t)
    const double h = 0.01;
    const int m = 201;
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = std::sin(i * h);
    const auto out = savitzky_golay(x, {7, 3, 1});
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t_center = (i + 3) * h;
        CHECK(std::abs(out[i] / h - std::cos(t_center)) < 1e-3);
    }
}

TEST_CASE("savitzky_golay exact on polynomials, zero on constants") {
    SUBCASE("constant spectrum, any derivative -> zeros") {
        std::vector<double> x(50, 3.7);
        for (int d = 1; d <= 3; ++d) {
            const auto out = savitzky_golay(x, {9, 3, d});
            for (double v : out) CHECK(std::abs(v) < 1e-12);
        }
    }
    SUBCASE("degree-p polynomial reproduces its analytic derivative at interior points") {
        // y(i) = 2 + 0.5 i - 0.1 i^2 + 0.003 i^3, p = 3
        const int m = 40;
        std::vector<double> x(m);
        for (int i = 0; i < m; ++i)
            x[i] = 2.0 + 0.5 * i - 0.1 * i * i + 0.003 * i * i * i;
        for (int d = 1; d <= 3; ++d) {
            const auto out = savitzky_golay(x, {7, 3, d});
            for (std::size_t k = 0; k < out.size(); ++k) {
                const double i = static_cast<double>(k + 3);
                double expect = 0.0;
                if (d == 1) expect = 0.5 - 0.2 * i + 0.009 * i * i;
                if (d == 2) expect = -0.2 + 0.018 * i;
                if (d == 3) expect = 0.018;
                CHECK(std::abs(out[k] - expect) < 1e-9);
            }
        }
    }
    SUBCASE("output length is m - w + 1") {
        std::vector<double> x(331, 1.0);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.1 * i);
        CHECK(savitzky_golay(x, {67, 5, 3}).size() == 265);
    }
    SUBCASE("window larger than spectrum") {
        std::vector<double> x(5, 1.0);
        CHECK_THROWS_AS(savitzky_golay(x, {7, 2, 1}), DataError);
    }
}

TEST_CASE("savgol parameter invariants") {
    CHECK_THROWS_AS(savgol_coefficients({4, 2, 1}), DataError);    // even width
    CHECK_THROWS_AS(savgol_coefficients({103, 2, 1}), DataError);  // too wide
    CHECK_THROWS_AS(savgol_coefficients({5, 2, 3}), DataError);    // d > p (redundant)
    CHECK_THROWS_AS(savgol_coefficients({5, 6, 1}), DataError);    // p > 5
    CHECK_THROWS_AS(savgol_coefficients({3, 3, 1}), DataError);    // p >= w
}

TEST_CASE("beer_lambert") {
    SUBCASE("hand values") {
        std::vector<double> r{1.0, 0.1, 0.01};
        const auto a = beer_lambert(r);
        CHECK(a[0] == doctest::Approx(0.0));
        CHECK(a[1] == doctest::Approx(1.0));
        CHECK(a[2] == doctest::Approx(2.0));
    }
    SUBCASE("strictly monotone decreasing in R") {
        Rng rng(4);
        for (int i = 0; i < 200; ++i) {
            const double r1 = rng.uniform(1e-6, 2.0);
            const double r2 = r1 + rng.uniform(1e-6, 1.0);
            std::vector<double> in{r1, r2};
            const auto out = beer_lambert(in);
            CHECK(out[0] > out[1]);
        }
    }
    SUBCASE("zero reflectance is a domain error naming the point") {
        std::vector<double> r{0.5, 0.0, 0.5};
        try {
            beer_lambert(r);
            FAIL("expected error");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("point 1") != std::string::npos);
        }
    }
}

TEST_CASE("snv") {
    SUBCASE("[1,2,3] -> [-1,0,1]") {
        std::vector<double> x{1, 2, 3};
        const auto out = snv(x);
        CHECK(out[0] == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(out[1] == doctest::Approx(0.0));
        CHECK(out[2] == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("defining property: mean 0, sample std 1 within 1e-12") {
        Rng rng(5);
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> x(37);
            for (auto& v : x) v = rng.uniform(0.0, 3.0);
            const auto out = snv(x);
            CHECK(std::abs(vec_mean(out)) < 1e-12);
            CHECK(std::abs(vec_std(out) - 1.0) < 1e-12);
        }
    }
    SUBCASE("constant spectrum is degenerate") {
        std::vector<double> x{5, 5, 5};
        CHECK_THROWS_AS(snv(x), DataError);
    }
}

TEST_CASE("msc_fit") {
    SUBCASE("mean of identical spectra is that spectrum") {
        Matrix m(2, 3);
        m.data() = {1, 2, 3, 1, 2, 3};
        const auto ref = msc_fit(m);
        CHECK(ref.values == std::vector<double>{1, 2, 3});
    }
    SUBCASE("hand arithmetic") {
        Matrix m(2, 2);
        m.data() = {0, 0, 2, 4};
        CHECK(msc_fit(m).values == std::vector<double>{1, 2});
    }
    SUBCASE("random matrix matches the column-mean oracle exactly") {
        Rng rng(6);
        Matrix m(50, 20);
        for (auto& v : m.data()) v = rng.uniform(0.0, 1.0);
        const auto ref = msc_fit(m);
        for (std::size_t j = 0; j < 20; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < 50; ++i) s += m(i, j);
            CHECK(ref.values[j] == s / 50.0);
        }
    }
    SUBCASE("fewer than two spectra") {
        Matrix m(1, 4, 1.0);
        CHECK_THROWS_AS(msc_fit(m), DataError);
    }
}

TEST_CASE("msc_correct") {
    Rng rng(7);
    std::vector<double> ref_vals(40);
    for (std::size_t i = 0; i < ref_vals.size(); ++i)
        ref_vals[i] = 0.5 + 0.3 * std::sin(0.3 * i);
    MscReference ref{ref_vals, MscReference::Source::Explicit};

    SUBCASE("self-correction fixed point") {
        const auto out = msc_correct(ref_vals, ref);
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(out[i] == doctest::Approx(ref_vals[i]).epsilon(1e-13));
    }
    SUBCASE("exact affine input recovers the reference within 1e-12") {
        std::vector<double> x(ref_vals.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = 2.0 * ref_vals[i] + 3.0;
        const auto out = msc_correct(x, ref);
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(std::abs(out[i] - ref_vals[i]) < 1e-12);
    }
    SUBCASE("noisy affine input: fitted coefficients match the OLS oracle within 1e-10") {
        std::vector<double> x(ref_vals.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = 2.0 * ref_vals[i] + 3.0 + rng.normal(0.0, 0.01);
        const auto fit = oracles::simple_linreg(ref_vals, x);
        const auto out = msc_correct(x, ref);
        // invert the oracle fit and compare element-wise
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double expect = (x[i] - fit.intercept) / fit.slope;
            CHECK(std::abs(out[i] - expect) < 1e-10);
        }
    }
    SUBCASE("zero-variance reference") {
        MscReference flat{std::vector<double>(40, 1.0), MscReference::Source::Explicit};
        CHECK_THROWS_AS(msc_correct(ref_vals, flat), NumericError);
    }
}

TEST_CASE("fsd and ssd") {
    SUBCASE("linear spectrum -> constant fsd, zero ssd") {
        std::vector<double> x(30);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 + 0.5 * i;
        const auto d1 = fsd(x);
        CHECK(d1.size() == 29);
        for (double v : d1) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
        const auto d2 = ssd(x);
        CHECK(d2.size() == 28);
        for (double v : d2) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("quadratic a*i^2 -> ssd constant 2a") {
        const double a = 0.25;
        std::vector<double> x(20);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = a * i * i;
        for (double v : ssd(x)) CHECK(v == doctest::Approx(2 * a).epsilon(1e-12));
    }
    SUBCASE("random vector: fsd matches shifted subtraction, ssd == fsd(fsd)") {
        Rng rng(8);
        std::vector<double> x(25);
        for (auto& v : x) v = rng.uniform(0.0, 1.0);
        const auto d1 = fsd(x);
        for (std::size_t i = 0; i < d1.size(); ++i) CHECK(d1[i] == x[i + 1] - x[i]);
        CHECK(ssd(x) == fsd(fsd(x)));
    }
    SUBCASE("too-short spectra") {
        std::vector<double> one{1.0};
        CHECK_THROWS_AS(fsd(one), DataError);
        std::vector<double> two{1.0, 2.0};
        CHECK_THROWS_AS(ssd(two), DataError);
    }
}

TEST_CASE("apply dispatch and axis bookkeeping") {
    SynthConfig cfg;
    cfg.n_eggs = 2;
    auto [data, truth] = generate(cfg);

    SUBCASE("raw is the identity") {
        const auto out = apply(PreprocessConfig{}, data);
        CHECK(out.samples == data.samples);
        CHECK(out.axis.values == data.axis.values);
    }
    SUBCASE("savgol(67,5,3) shortens 331 points to 265 and trims the axis") {
        PreprocessConfig pc;
        pc.technique = Technique::SavGol;
        pc.savgol = {67, 5, 3};
        const auto out = apply(pc, data);
        CHECK(out.n_wavelengths() == 265);
        CHECK(out.axis.values.front() == 740.0 + 33.0);
        CHECK(out.axis.values.back() == 1070.0 - 33.0);
    }
    SUBCASE("fsd/ssd trim the leading axis points") {
        PreprocessConfig pc;
        pc.technique = Technique::Fsd;
        CHECK(apply(pc, data).axis.values.front() == 741.0);
        pc.technique = Technique::Ssd;
        CHECK(apply(pc, data).axis.values.front() == 742.0);
    }
    SUBCASE("msc without a reference is a contract violation") {
        PreprocessConfig pc;
        pc.technique = Technique::Msc;
        CHECK_THROWS_AS(apply(pc, data), DataError);
    }
    SUBCASE("savgol rejects a non-uniform axis") {
        SpectraSet bent = data;
        bent.axis.values.back() += 0.5;
        PreprocessConfig pc;
        pc.technique = Technique::SavGol;
        pc.savgol = {5, 2, 2};
        CHECK_THROWS_AS(apply(pc, bent), DataError);
    }
    SUBCASE("parallel batch equals the serial reference for every technique") {
        const MscReference ref = msc_fit(data.samples);
        for (int t = 1; t <= 7; ++t) {
            PreprocessConfig pc;
            pc.technique = static_cast<Technique>(t);
            pc.savgol = {17, 3, 2};
            const MscReference* r = pc.technique == Technique::Msc ? &ref : nullptr;
            const Matrix par = apply_matrix(pc, data.samples, r, 0);
            const Matrix ser = reference::apply_matrix_serial(pc, data.samples, r);
            CHECK(par == ser);
        }
    }
}

TEST_CASE("preprocess config json round trip uses the documented schema") {
    PreprocessConfig pc;
    pc.technique = Technique::SavGol;
    pc.savgol = {67, 5, 3};
    const auto j = pc.to_json();
    CHECK(j.at("technique").get<int>() == 2);
    CHECK(j.at("savgol").at("width").get<int>() == 67);
    CHECK(PreprocessConfig::from_json(j) == pc);

    PreprocessConfig snv_cfg;
    snv_cfg.technique = Technique::Snv;
    const auto j2 = snv_cfg.to_json();
    CHECK(j2.at("technique").get<int>() == 4);
    CHECK(!j2.contains("savgol"));

    CHECK(PreprocessConfig::parse("savgol:67,5,3") == pc);
    CHECK(PreprocessConfig::parse("snv") == snv_cfg);
    CHECK_THROWS_AS(PreprocessConfig::parse("wavelet"), DataError);
}
