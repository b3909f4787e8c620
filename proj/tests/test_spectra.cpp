#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "specal/errors.hpp"
#include "specal/folds.hpp"
#include "specal/rng.hpp"
#include "specal/spectra.hpp"
#include "specal/synth.hpp"

using namespace specal;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "specal_test_spectra";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SpectraSet tiny_set() {
    SpectraSet s;
    s.axis.values = {740, 741, 742, 743};
    s.samples = Matrix(3, 4);
    const double vals[12] = {0.5, 1.25, 3, 0.75, 0.125, 2.5, 1, 0.25, 4, 1.5, 0.625, 2};
    s.samples.data().assign(vals, vals + 12);
    s.targets = {0, 7, 21};
    s.sample_ids = {"a", "b", "c"};
    return s;
}

}  // namespace

TEST_CASE("load_csv on the default synthetic fixture has the nominal shape") {
    SynthConfig cfg;
    auto [set, truth] = generate(cfg);
    const auto dir = temp_dir();
    save_fixture(set, truth, dir);
    SpectraSet loaded = load_csv(dir / "spectra.csv");
    CHECK(loaded.n_samples() == 660);
    CHECK(loaded.n_wavelengths() == 331);
    CHECK(loaded.axis.values.front() == 740.0);
    CHECK(loaded.axis.values.back() == 1070.0);
}

TEST_CASE("load_csv errors") {
    const auto dir = temp_dir();

    SUBCASE("header only -> empty-dataset error") {
        const auto p = dir / "empty.csv";
        std::ofstream(p) << "sample_id,target,740,741\n";
        CHECK_THROWS_AS(load_csv(p), DataError);
    }
    SUBCASE("bad cell names row and column") {
        const auto p = dir / "bad.csv";
        std::ofstream(p) << "sample_id,target,740,741\nx,1,0.5,oops\n";
        try {
            load_csv(p);
            FAIL("expected error");
        } catch (const DataError& e) {
            const std::string msg = e.what();
            CHECK(msg.find(":2") != std::string::npos);  // line
            CHECK(msg.find("column 4") != std::string::npos);
        }
    }
    SUBCASE("non-increasing wavelength headers") {
        const auto p = dir / "order.csv";
        std::ofstream(p) << "sample_id,target,741,740\nx,1,0.5,0.5\n";
        CHECK_THROWS_AS(load_csv(p), DataError);
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(load_csv(dir / "nope.csv"), DataError); }
}

TEST_CASE("csv round trip is byte-stable and comments are ignored") {
    const auto dir = temp_dir();
    const auto p1 = dir / "t1.csv", p2 = dir / "t2.csv";
    SpectraSet s = tiny_set();
    save_csv(s, p1, {"units: days"});
    SpectraSet r1 = load_csv(p1);
    CHECK(r1.samples == s.samples);
    CHECK(r1.targets == s.targets);
    CHECK(r1.sample_ids == s.sample_ids);
    save_csv(r1, p2, {"units: days"});
    CHECK(slurp(p1) == slurp(p2));
    CHECK(slurp(p1).find("# units: days\n") == 0);
}

TEST_CASE("average_replicates") {
    SpectraSet a = tiny_set();

    SUBCASE("identity on equal inputs") {
        SpectraSet avg = average_replicates(a, a);
        CHECK(avg.samples == a.samples);
    }
    SUBCASE("hand values: rows [2,4] and [4,8] -> [3,6]") {
        SpectraSet x = a, y = a;
        x.samples.data().assign({2, 4, 2, 4, 2, 4, 2, 4, 2, 4, 2, 4});
        y.samples.data().assign({4, 8, 4, 8, 4, 8, 4, 8, 4, 8, 4, 8});
        SpectraSet avg = average_replicates(x, y);
        for (std::size_t i = 0; i < 12; ++i)
            CHECK(avg.samples.data()[i] == (i % 2 == 0 ? 3.0 : 6.0));
    }
    SUBCASE("random pair matches the element-wise oracle exactly and commutes") {
        Rng rng(3);
        SpectraSet b = a;
        for (auto& v : b.samples.data()) v = rng.uniform(0.1, 2.0);
        SpectraSet ab = average_replicates(a, b);
        SpectraSet ba = average_replicates(b, a);
        for (std::size_t i = 0; i < 12; ++i) {
            CHECK(ab.samples.data()[i] == 0.5 * (a.samples.data()[i] + b.samples.data()[i]));
            CHECK(ab.samples.data()[i] == ba.samples.data()[i]);
        }
    }
    SUBCASE("alignment errors") {
        SpectraSet b = a;
        b.sample_ids[1] = "zzz";
        CHECK_THROWS_AS(average_replicates(a, b), DataError);
        SpectraSet c = a;
        c.axis.values[0] = 700;
        CHECK_THROWS_AS(average_replicates(a, c), DataError);
    }
}

TEST_CASE("make_folds reproduces the 462/132/66 split on n=660") {
    SplitPlan plan;
    plan.n_folds = 10;
    plan.n_repetitions = 50;
    plan.validation_fraction = 2.0 / 9.0;
    plan.seed = 42;
    const auto folds = make_folds(660, plan);
    REQUIRE(folds.size() == 500);
    for (const auto& fa : folds) {
        CHECK(fa.train_idx.size() == 462);
        CHECK(fa.validation_idx.size() == 132);
        CHECK(fa.test_idx.size() == 66);
    }
}

TEST_CASE("make_folds partition invariants") {
    SplitPlan plan;
    plan.n_folds = 4;
    plan.n_repetitions = 3;
    plan.seed = 9;
    const std::size_t n = 23;
    const auto folds = make_folds(n, plan);

    for (const auto& fa : folds) {
        std::set<std::size_t> seen;
        for (const auto* part : {&fa.train_idx, &fa.validation_idx, &fa.test_idx})
            for (std::size_t i : *part) {
                CHECK(seen.insert(i).second);  // pairwise disjoint
                CHECK(i < n);
            }
        CHECK(seen.size() == n);  // union covers everything
    }
    // test folds of one repetition partition the samples exactly
    for (int rep = 0; rep < plan.n_repetitions; ++rep) {
        std::set<std::size_t> tests;
        for (const auto& fa : folds)
            if (fa.repetition == rep)
                for (std::size_t i : fa.test_idx) CHECK(tests.insert(i).second);
        CHECK(tests.size() == n);
    }
}

TEST_CASE("make_folds forced singleton folds") {
    SplitPlan plan;
    plan.n_folds = 10;
    plan.n_repetitions = 1;
    plan.validation_fraction = 2.0 / 9.0;
    const auto folds = make_folds(10, plan);
    for (const auto& fa : folds) CHECK(fa.test_idx.size() == 1);
}

TEST_CASE("make_folds determinism across seeds") {
    SplitPlan plan;
    plan.n_folds = 5;
    plan.n_repetitions = 2;

    plan.seed = 1234;
    const auto a = make_folds(57, plan);
    const auto b = make_folds(57, plan);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].train_idx == b[i].train_idx);
        CHECK(a[i].validation_idx == b[i].validation_idx);
        CHECK(a[i].test_idx == b[i].test_idx);
    }
    // different seeds shuffle differently
    int distinct = 0;
    for (std::uint64_t seed : {2u, 3u, 4u, 5u, 6u}) {
        plan.seed = seed;
        const auto c = make_folds(57, plan);
        if (c[0].test_idx != a[0].test_idx) ++distinct;
    }
    CHECK(distinct >= 4);
}

TEST_CASE("make_folds infeasible plans") {
    SplitPlan plan;
    plan.n_folds = 10;
    CHECK_THROWS_AS(make_folds(9, plan), DataError);
    plan.n_folds = 1;
    CHECK_THROWS_AS(make_folds(100, plan), DataError);
}

TEST_CASE("validate catches shape and value violations") {
    SpectraSet s = tiny_set();
    s.targets.pop_back();
    CHECK_THROWS_AS(s.validate(), DataError);
    SpectraSet t = tiny_set();
    t.samples(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(t.validate(), DataError);
    WavelengthAxis empty;
    CHECK_THROWS_AS(empty.validate(), DataError);
}
