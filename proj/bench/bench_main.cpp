// Times the OpenMP kernels against their serial reference implementations
// and checks that both produce identical bytes. Run with --quick for a
// reduced workload (used by the test suite).

#include <chrono>
#include <cstdio>
#include <cstring>

#include <nlohmann/json.hpp>

#include "specal/cv.hpp"
#include "specal/feature_select.hpp"
#include "specal/parallel.hpp"
#include "specal/preprocess.hpp"
#include "specal/synth.hpp"

using namespace specal;

namespace {

template <typename Fn>
double timed(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

int fail(const char* what) {
    std::fprintf(stderr, "MISMATCH: %s parallel output differs from serial reference\n", what);
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const int workers = resolve_jobs(0);
    std::printf("workers: %d%s\n", workers, quick ? " (quick)" : "");

    SynthConfig cfg;
    cfg.seed = 7;
    auto [data, truth] = generate(cfg);

    // kernel 1: batch Savitzky-Golay
    {
        const PreprocessConfig prep = PreprocessConfig::parse("savgol:17,3,2");
        const int iters = quick ? 3 : 30;
        Matrix par_out, ser_out;
        const double t_par = timed([&] {
            for (int i = 0; i < iters; ++i) par_out = apply_matrix(prep, data.samples, nullptr, 0);
        });
        const double t_ser = timed([&] {
            for (int i = 0; i < iters; ++i)
                ser_out = reference::apply_matrix_serial(prep, data.samples, nullptr);
        });
        if (!(par_out == ser_out)) return fail("savgol batch");
        std::printf("savgol batch      serial %8.3f s   parallel %8.3f s   speedup %.2fx\n",
                    t_ser, t_par, t_ser / t_par);
    }

    // kernel 2: correlation ranking
    {
        const int iters = quick ? 5 : 50;
        FeatureRanking par_r, ser_r;
        const double t_par = timed([&] {
            for (int i = 0; i < iters; ++i)
                par_r = rank_by_correlation(data.samples, data.targets, 0);
        });
        const double t_ser = timed([&] {
            for (int i = 0; i < iters; ++i)
                ser_r = reference::rank_by_correlation_serial(data.samples, data.targets);
        });
        if (par_r.scores != ser_r.scores || par_r.order != ser_r.order)
            return fail("correlation ranking");
        std::printf("correlation rank  serial %8.3f s   parallel %8.3f s   speedup %.2fx\n",
                    t_ser, t_par, t_ser / t_par);
    }

    // workload: repeated CV over fold cells
    {
        SplitPlan plan;
        plan.n_folds = 10;
        plan.n_repetitions = quick ? 1 : 5;
        plan.seed = 11;
        PipelineConfig pipe;
        pipe.preprocess = PreprocessConfig::parse("snv");
        pipe.threshold_percent = 40.0;
        MlpSpec mlp;
        mlp.train.max_epochs = quick ? 20 : 120;
        mlp.train.learning_rate = 0.15;
        mlp.train.lr_decay = 0.998;
        mlp.train.patience = 25;
        pipe.model = mlp;

        CvReport par_rep, ser_rep;
        const double t_par = timed([&] { par_rep = run_repeated_cv(data, plan, pipe, 0); });
        const double t_ser =
            timed([&] { ser_rep = reference::run_repeated_cv_serial(data, plan, pipe); });
        if (par_rep.to_json().dump() != ser_rep.to_json().dump()) return fail("repeated CV");
        std::printf("repeated CV (mlp) serial %8.3f s   parallel %8.3f s   speedup %.2fx\n",
                    t_ser, t_par, t_ser / t_par);
    }

    std::printf("all parallel kernels match their serial references\n");
    return 0;
}
