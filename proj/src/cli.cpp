#include "specal/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "specal/cv.hpp"
#include "specal/errors.hpp"
#include "specal/manifest.hpp"
#include "specal/svg.hpp"
#include "specal/synth.hpp"
#include "specal/tuning.hpp"
#include "specal/util.hpp"

namespace specal::cli {

namespace {

std::uint64_t resolve_seed(std::uint64_t flag_value) {
    return flag_value != 0 ? flag_value : default_seed();
}

MlpArchitecture parse_arch(const std::string& spec) {
    MlpArchitecture arch;
    if (spec.empty() || spec == "linear") return arch;
    for (auto tok : split(spec, ',')) {
        auto v = parse_double(tok);
        if (!v || *v != static_cast<int>(*v))
            throw DataError("bad architecture spec '" + spec + "'");
        arch.hidden.push_back(static_cast<int>(*v));
    }
    arch.validate();
    return arch;
}

SplitPlan make_plan(int folds, int reps, std::uint64_t seed) {
    SplitPlan plan;
    plan.n_folds = folds;
    plan.n_repetitions = reps;
    plan.seed = seed;
    return plan;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    std::uint64_t seed, const nlohmann::json& config,
                    const std::vector<std::filesystem::path>& inputs) {
    RunManifest m;
    m.command = command;
    m.seed = seed;
    m.set_config(config);
    for (const auto& in : inputs) m.add_input(in);
    m.write(dir / "manifest.json");
}

}  // namespace

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SPECAL_SEED")) {
        auto v = parse_double(env);
        if (v && *v >= 0 && *v == std::floor(*v)) return static_cast<std::uint64_t>(*v);
        throw DataError("SPECAL_SEED must be a non-negative integer");
    }
    return kDefaultSeed;
}

void cmd_synth(const SynthOptions& opt) {
    SynthConfig cfg;
    cfg.seed = resolve_seed(opt.seed);
    cfg.n_eggs = opt.eggs;
    cfg.n_days = opt.days;
    cfg.noise_sd = opt.noise_sd;
    cfg.scatter = opt.scatter;
    cfg.informative_fraction = opt.informative_fraction;
    auto [set, truth] = generate(cfg);
    save_fixture(set, truth, opt.out_dir);
    write_manifest(opt.out_dir, "synth", cfg.seed,
                   {{"eggs", cfg.n_eggs},
                    {"days", cfg.n_days},
                    {"noise_sd", cfg.noise_sd},
                    {"scatter", cfg.scatter},
                    {"informative_fraction", cfg.informative_fraction}},
                   {});
}

void cmd_preprocess(const PreprocessOptions& opt) {
    const PreprocessConfig cfg = PreprocessConfig::parse(opt.prep);
    SpectraSet data = load_csv(opt.input);
    std::optional<MscReference> ref;
    std::vector<std::filesystem::path> inputs{opt.input};
    if (cfg.technique == Technique::Msc) {
        if (opt.msc_reference) {
            ref = msc_fit(load_csv(*opt.msc_reference));
            inputs.push_back(*opt.msc_reference);
        } else {
            ref = msc_fit(data);  // the input acts as its own calibration set
        }
    }
    SpectraSet out = apply(cfg, data, ref ? &*ref : nullptr, opt.jobs);
    save_csv(out, opt.output, {"preprocessed with " + cfg.label()});

    RunManifest m;
    m.command = "preprocess";
    m.set_config({{"prep", cfg.to_json()}, {"jobs", opt.jobs}});
    for (const auto& in : inputs) m.add_input(in);
    m.write(opt.output.string() + ".manifest.json");
}

void cmd_select(const SelectOptions& opt) {
    const PreprocessConfig cfg = PreprocessConfig::parse(opt.prep);
    if (cfg.technique == Technique::Msc)
        throw DataError("select: msc needs fold-scoped calibration; preprocess separately");
    SpectraSet data = load_csv(opt.input);
    SpectraSet pre = apply(cfg, data, nullptr, opt.jobs);
    FeatureRanking ranking = rank_by_correlation(pre.samples, pre.targets, opt.jobs);
    write_ranking_csv(opt.output, pre.axis, ranking);
    if (opt.threshold) {
        ThresholdSelection sel = select_threshold(ranking, *opt.threshold);
        const auto path = opt.retained_output.value_or(
            opt.output.parent_path() / "retained.csv");
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw DataError("cannot write " + path.string());
        out << "wavelength_nm\n";
        for (std::size_t j : sel.retained) out << fmt_double(pre.axis.values[j]) << "\n";
    }
    RunManifest m;
    m.command = "select";
    m.set_config({{"prep", cfg.to_json()},
                  {"threshold", opt.threshold ? nlohmann::json(*opt.threshold)
                                              : nlohmann::json()}});
    m.add_input(opt.input);
    m.write(opt.output.string() + ".manifest.json");
}

namespace {

PipelineConfig build_pipeline(const std::string& model, int lv, const std::string& arch,
                              const std::string& prep, double threshold, int max_epochs,
                              double lr, double decay, int patience) {
    PipelineConfig cfg;
    cfg.preprocess = PreprocessConfig::parse(prep);
    cfg.threshold_percent = threshold;
    if (model == "pls") {
        cfg.model = PlsSpec{lv};
    } else if (model == "mlp") {
        MlpSpec spec;
        spec.architecture = parse_arch(arch);
        spec.train.max_epochs = max_epochs;
        spec.train.learning_rate = lr;
        spec.train.lr_decay = decay;
        spec.train.patience = patience;
        cfg.model = spec;
    } else {
        throw DataError("unknown model '" + model + "' (expected pls or mlp)");
    }
    return cfg;
}

}  // namespace

void cmd_cv(const CvOptions& opt) {
    const std::uint64_t seed = resolve_seed(opt.seed);
    SpectraSet data = load_csv(opt.input);
    const PipelineConfig cfg =
        build_pipeline(opt.model, opt.latent_variables, opt.arch, opt.prep, opt.threshold,
                       opt.max_epochs, opt.learning_rate, opt.lr_decay, opt.patience);
    const SplitPlan plan = make_plan(opt.folds, opt.reps, seed);
    CvReport report = run_repeated_cv(data, plan, cfg, opt.jobs);

    std::filesystem::create_directories(opt.out_dir);
    report.write_csv(opt.out_dir / "cv_report.csv");
    std::ofstream json_out(opt.out_dir / "cv_report.json", std::ios::trunc);
    json_out << report.to_json().dump(2) << "\n";
    write_manifest(opt.out_dir, "cv", seed,
                   {{"pipeline", cfg.to_json()},
                    {"folds", plan.n_folds},
                    {"reps", plan.n_repetitions}},
                   {opt.input});
}

void cmd_tune(const TuneOptions& opt) {
    const std::uint64_t seed = resolve_seed(opt.seed);
    SpectraSet data = load_csv(opt.input);
    GridSpec grid = opt.full_scale ? make_paper_grid(seed) : make_desk_grid(seed);
    std::filesystem::create_directories(opt.out_dir);
    ProgressFn progress;
    if (!opt.quiet) progress = [](const std::string& msg) { std::cerr << msg << "\n"; };

    auto run_phase1 = [&] {
        PhaseResult r = phase1(data, grid, opt.jobs, progress);
        r.write_csv(opt.out_dir / "phase1_results.csv");
        r.write_winner_json(opt.out_dir / "phase1_winner.json");
        return r;
    };
    auto run_savgol = [&] {
        PhaseResult r = savgol_search(data, grid, opt.jobs, progress);
        r.write_csv(opt.out_dir / "savgol_results.csv");
        r.write_winner_json(opt.out_dir / "savgol_winner.json");
        std::ofstream table(opt.out_dir / "savgol_table.txt", std::ios::trunc);
        table << format_savgol_table(r);
        return r;
    };
    auto run_phase2 = [&](const PreprocessConfig& prep) {
        PhaseResult r = phase2(data, grid, prep, opt.jobs, progress);
        r.write_csv(opt.out_dir / "phase2_results.csv");
        r.write_winner_json(opt.out_dir / "phase2_winner.json");
        return r;
    };
    auto run_phase3 = [&](const PreprocessConfig& prep, const MlpArchitecture& arch) {
        PhaseResult r = phase3(data, grid, prep, arch, opt.jobs, progress);
        r.write_csv(opt.out_dir / "phase3_results.csv");
        r.write_winner_json(opt.out_dir / "phase3_winner.json");
        return r;
    };

    if (opt.phase == "phase1") {
        run_phase1();
    } else if (opt.phase == "savgol") {
        run_savgol();
    } else if (opt.phase == "phase2") {
        if (opt.prep.empty()) throw DataError("tune phase2 needs --prep");
        run_phase2(PreprocessConfig::parse(opt.prep));
    } else if (opt.phase == "phase3") {
        if (opt.prep.empty() || opt.arch.empty())
            throw DataError("tune phase3 needs --prep and --arch");
        run_phase3(PreprocessConfig::parse(opt.prep), parse_arch(opt.arch));
    } else if (opt.phase == "all") {
        run_phase1();
        PhaseResult sg = run_savgol();
        const PreprocessConfig prep = sg.winner().config.preprocess;
        PhaseResult p2 = run_phase2(prep);
        const auto arch = std::get<MlpSpec>(p2.winner().config.model).architecture;
        PhaseResult p3 = run_phase3(prep, arch);
        // final configuration file for finalize/predict convenience
        nlohmann::json final_cfg;
        final_cfg["prep"] = prep.to_json();
        final_cfg["arch"] = arch.hidden;
        final_cfg["threshold"] = p3.winner().config.threshold_percent;
        std::ofstream out(opt.out_dir / "tuned_config.json", std::ios::trunc);
        out << final_cfg.dump(2) << "\n";
    } else {
        throw DataError("unknown tune phase '" + opt.phase +
                        "' (expected phase1|savgol|phase2|phase3|all)");
    }
    write_manifest(opt.out_dir, "tune " + opt.phase, seed,
                   {{"full_scale", opt.full_scale},
                    {"prep", opt.prep},
                    {"arch", opt.arch}},
                   {opt.input});
}

void cmd_finalize(const FinalizeOptions& opt) {
    const std::uint64_t seed = resolve_seed(opt.seed);
    SpectraSet data = load_csv(opt.input);
    const PipelineConfig cfg =
        build_pipeline("mlp", 0, opt.arch, opt.prep, opt.threshold, opt.max_epochs,
                       opt.learning_rate, opt.lr_decay, opt.patience);
    const SplitPlan plan = make_plan(opt.folds, opt.reps, seed);
    FinalReport report = finalize(data, plan, cfg, opt.jobs);

    std::filesystem::create_directories(opt.out_dir);
    report.cv.write_csv(opt.out_dir / "cv_report.csv");
    {
        std::ofstream out(opt.out_dir / "final_report.json", std::ios::trunc);
        out << report.to_json().dump(2) << "\n";
    }
    {
        std::ofstream out(opt.out_dir / "performance_table.txt", std::ios::trunc);
        out << report.format_table();
    }
    {
        std::ofstream out(opt.out_dir / "model.json", std::ios::trunc);
        out << report.model_json << "\n";
    }
    {
        std::ofstream out(opt.out_dir / "predictions.csv", std::ios::trunc);
        out << "actual,predicted\n";
        for (std::size_t i = 0; i < report.rep_actual.size(); ++i)
            out << fmt_double(report.rep_actual[i]) << ','
                << fmt_double(report.rep_predicted[i]) << "\n";
    }
    write_manifest(opt.out_dir, "finalize", seed,
                   {{"pipeline", cfg.to_json()},
                    {"folds", plan.n_folds},
                    {"reps", plan.n_repetitions}},
                   {opt.input});
    std::cout << report.format_table();
}

void cmd_predict(const PredictOptions& opt) {
    std::ifstream in(opt.model);
    if (!in) throw DataError("cannot open model " + opt.model.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);

    SpectraSet data = load_csv(opt.input);
    const PreprocessConfig prep = PreprocessConfig::from_json(j.at("config").at("preprocess"));
    std::optional<MscReference> ref;
    if (j.contains("msc_reference")) {
        ref = MscReference{j.at("msc_reference").get<std::vector<double>>(),
                           MscReference::Source::CalibrationMean};
    }
    Matrix pre = apply_matrix(prep, data.samples, ref ? &*ref : nullptr, 0);
    const auto retained = j.at("retained").get<std::vector<std::size_t>>();
    Matrix x = pre.take_cols(retained);

    std::vector<double> preds;
    const auto& model = j.at("model");
    if (model.at("schema").get<std::string>() == "specal.pls/1")
        preds = predict_pls(PlsModel::from_json(model), x);
    else
        preds = predict(MlpModel::from_json(model), x);

    std::ofstream out(opt.output, std::ios::trunc);
    if (!out) throw DataError("cannot write " + opt.output.string());
    out << "sample_id,actual,predicted\n";
    for (std::size_t i = 0; i < preds.size(); ++i)
        out << data.sample_ids[i] << ',' << fmt_double(data.targets[i]) << ','
            << fmt_double(preds[i]) << "\n";

    RunManifest m;
    m.command = "predict";
    m.set_config({{"model", opt.model.string()}});
    m.add_input(opt.model);
    m.add_input(opt.input);
    m.write(opt.output.string() + ".manifest.json");
}

void cmd_plot(const PlotOptions& opt) {
    std::filesystem::create_directories(opt.out_dir);
    bool did = false;
    if (opt.spectra) {
        SpectraSet data = load_csv(*opt.spectra);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < data.n_samples(); ++i) {
            const double* r = data.samples.row(i);
            rows.emplace_back(r, r + data.n_wavelengths());
        }
        svg::spectra_overlay(opt.out_dir / "spectra_overlay.svg", data.axis.values, rows,
                             data.targets, "spectra by storage days");
        did = true;
    }
    if (opt.phase_results) {
        // phaseN_results.csv -> threshold vs mean validation R^2
        std::ifstream in(*opt.phase_results);
        if (!in) throw DataError("cannot open " + opt.phase_results->string());
        std::string line;
        std::getline(in, line);
        const auto header = split(line, ',');
        auto col = [&](std::string_view name) -> std::size_t {
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == name) return i;
            throw DataError("column '" + std::string(name) + "' missing in " +
                            opt.phase_results->string());
        };
        const std::size_t c_thr = col("threshold"), c_mean = col("mean_val_r2");
        svg::Series mean_series{"mean validation R2", "#1f5fbf", {}};
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            auto cells = split(line, ',');
            auto thr = parse_double(cells[c_thr]);
            auto mean = parse_double(cells[c_mean]);
            if (thr && mean) mean_series.points.emplace_back(*thr, *mean);
        }
        std::sort(mean_series.points.begin(), mean_series.points.end());
        svg::line_chart(opt.out_dir / "r2_vs_threshold.svg", {mean_series},
                        "validation R2 vs feature threshold", "threshold (%)",
                        "validation R2");
        did = true;
    }
    if (opt.predictions) {
        std::ifstream in(*opt.predictions);
        if (!in) throw DataError("cannot open " + opt.predictions->string());
        std::string line;
        std::getline(in, line);
        const auto header = split(line, ',');
        int c_actual = -1, c_pred = -1;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == "actual") c_actual = static_cast<int>(i);
            if (header[i] == "predicted") c_pred = static_cast<int>(i);
        }
        if (c_actual < 0 || c_pred < 0)
            throw DataError("predictions csv needs actual,predicted columns");
        std::vector<double> actual, predicted;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            auto cells = split(line, ',');
            auto a = parse_double(cells[c_actual]);
            auto p = parse_double(cells[c_pred]);
            if (a && p) {
                actual.push_back(*a);
                predicted.push_back(*p);
            }
        }
        svg::scatter_fit(opt.out_dir / "actual_vs_predicted.svg", actual, predicted,
                         "actual vs predicted");
        svg::error_histogram(opt.out_dir / "error_histogram.svg", actual, predicted, 12,
                             "absolute error distribution");
        did = true;
    }
    if (!did)
        throw DataError("plot: pass at least one of --spectra, --phase-results, --predictions");
}

namespace {

nlohmann::json load_config_file(int argc, const char* const* argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string_view(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw DataError(std::string("cannot open config ") + argv[i + 1]);
            return nlohmann::json::parse(in, nullptr, true, true);
        }
    }
    return nlohmann::json::object();
}

template <typename T>
void from_cfg(const nlohmann::json& cfg, const char* key, T* out) {
    if (cfg.contains(key)) *out = cfg.at(key).get<T>();
}

void from_cfg(const nlohmann::json& cfg, const char* key, std::filesystem::path* out) {
    if (cfg.contains(key)) *out = cfg.at(key).get<std::string>();
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"spectral calibration toolkit: preprocessing, wavelength selection, "
                 "PLS/MLP regression, repeated cross-validation and grid search"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON file supplying defaults for any flag");

    nlohmann::json cfg;
    try {
        cfg = load_config_file(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    SynthOptions synth_opt;
    from_cfg(cfg, "out", &synth_opt.out_dir);
    from_cfg(cfg, "seed", &synth_opt.seed);
    from_cfg(cfg, "eggs", &synth_opt.eggs);
    from_cfg(cfg, "days", &synth_opt.days);
    from_cfg(cfg, "noise-sd", &synth_opt.noise_sd);
    from_cfg(cfg, "informative-fraction", &synth_opt.informative_fraction);
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic fixture");
    synth_cmd->add_option("--out", synth_opt.out_dir, "output directory");
    synth_cmd->add_option("--seed", synth_opt.seed, "master seed (0 = default)");
    synth_cmd->add_option("--eggs", synth_opt.eggs, "eggs (samples per day)");
    synth_cmd->add_option("--days", synth_opt.days, "storage days");
    synth_cmd->add_option("--noise-sd", synth_opt.noise_sd, "iid noise sd");
    synth_cmd->add_flag("!--no-scatter", synth_opt.scatter, "disable multiplicative scatter");
    synth_cmd->add_option("--informative-fraction", synth_opt.informative_fraction,
                          "share of the axis carrying day signal");

    PreprocessOptions pre_opt;
    from_cfg(cfg, "input", &pre_opt.input);
    from_cfg(cfg, "output", &pre_opt.output);
    from_cfg(cfg, "prep", &pre_opt.prep);
    from_cfg(cfg, "jobs", &pre_opt.jobs);
    auto* pre_cmd = app.add_subcommand("preprocess", "apply one technique to a CSV");
    pre_cmd->add_option("--input", pre_opt.input, "input spectra CSV")->required();
    pre_cmd->add_option("--output", pre_opt.output, "output CSV")->required();
    pre_cmd->add_option("--prep", pre_opt.prep, "raw|savgol:w,p,d|beer|snv|msc|fsd|ssd");
    std::string msc_ref_path;
    pre_cmd->add_option("--msc-ref", msc_ref_path, "calibration CSV for the msc reference");
    pre_cmd->add_option("--jobs", pre_opt.jobs, "worker threads (0 = all)");

    SelectOptions sel_opt;
    from_cfg(cfg, "input", &sel_opt.input);
    from_cfg(cfg, "output", &sel_opt.output);
    from_cfg(cfg, "prep", &sel_opt.prep);
    auto* sel_cmd = app.add_subcommand("select", "rank wavelengths by |r| with the target");
    sel_cmd->add_option("--input", sel_opt.input, "input spectra CSV")->required();
    sel_cmd->add_option("--output", sel_opt.output, "ranking CSV")->required();
    sel_cmd->add_option("--prep", sel_opt.prep, "preprocessing before ranking");
    double sel_threshold = -1;
    sel_cmd->add_option("--threshold", sel_threshold, "also write the retained set (percent)");
    sel_cmd->add_option("--jobs", sel_opt.jobs, "worker threads (0 = all)");

    CvOptions cv_opt;
    from_cfg(cfg, "input", &cv_opt.input);
    from_cfg(cfg, "out", &cv_opt.out_dir);
    from_cfg(cfg, "model", &cv_opt.model);
    from_cfg(cfg, "lv", &cv_opt.latent_variables);
    from_cfg(cfg, "arch", &cv_opt.arch);
    from_cfg(cfg, "prep", &cv_opt.prep);
    from_cfg(cfg, "threshold", &cv_opt.threshold);
    from_cfg(cfg, "folds", &cv_opt.folds);
    from_cfg(cfg, "reps", &cv_opt.reps);
    from_cfg(cfg, "seed", &cv_opt.seed);
    from_cfg(cfg, "jobs", &cv_opt.jobs);
    from_cfg(cfg, "max-epochs", &cv_opt.max_epochs);
    from_cfg(cfg, "learning-rate", &cv_opt.learning_rate);
    auto* cv_cmd = app.add_subcommand("cv", "repeated k-fold evaluation of one pipeline");
    cv_cmd->add_option("--input", cv_opt.input, "input spectra CSV")->required();
    cv_cmd->add_option("--out", cv_opt.out_dir, "output directory");
    cv_cmd->add_option("--model", cv_opt.model, "pls | mlp");
    cv_cmd->add_option("--lv", cv_opt.latent_variables, "PLS latent variables");
    cv_cmd->add_option("--arch", cv_opt.arch, "MLP hidden sizes, e.g. 10 or 180,10");
    cv_cmd->add_option("--prep", cv_opt.prep, "preprocessing spec");
    cv_cmd->add_option("--threshold", cv_opt.threshold, "feature threshold percent");
    cv_cmd->add_option("--folds", cv_opt.folds, "folds");
    cv_cmd->add_option("--reps", cv_opt.reps, "repetitions");
    cv_cmd->add_option("--seed", cv_opt.seed, "master seed (0 = default)");
    cv_cmd->add_option("--jobs", cv_opt.jobs, "worker threads (0 = all)");
    cv_cmd->add_option("--max-epochs", cv_opt.max_epochs, "MLP epoch budget");
    cv_cmd->add_option("--learning-rate", cv_opt.learning_rate, "MLP initial rate");
    cv_cmd->add_option("--lr-decay", cv_opt.lr_decay, "MLP geometric rate decay");
    cv_cmd->add_option("--patience", cv_opt.patience, "MLP early-stopping patience");

    TuneOptions tune_opt;
    from_cfg(cfg, "input", &tune_opt.input);
    from_cfg(cfg, "out", &tune_opt.out_dir);
    from_cfg(cfg, "seed", &tune_opt.seed);
    from_cfg(cfg, "jobs", &tune_opt.jobs);
    auto* tune_cmd = app.add_subcommand("tune", "grid-search phases");
    tune_cmd->add_option("phase", tune_opt.phase, "phase1|savgol|phase2|phase3|all")
        ->required();
    tune_cmd->add_option("--input", tune_opt.input, "input spectra CSV")->required();
    tune_cmd->add_option("--out", tune_opt.out_dir, "output directory");
    tune_cmd->add_flag("--full", tune_opt.full_scale, "paper-scale axes and 50 repetitions");
    tune_cmd->add_option("--seed", tune_opt.seed, "master seed (0 = default)");
    tune_cmd->add_option("--jobs", tune_opt.jobs, "worker threads (0 = all)");
    tune_cmd->add_option("--prep", tune_opt.prep, "preprocessing (phase2/phase3)");
    tune_cmd->add_option("--arch", tune_opt.arch, "architecture (phase3)");
    tune_cmd->add_flag("--quiet", tune_opt.quiet, "suppress progress lines");

    FinalizeOptions fin_opt;
    from_cfg(cfg, "input", &fin_opt.input);
    from_cfg(cfg, "out", &fin_opt.out_dir);
    from_cfg(cfg, "prep", &fin_opt.prep);
    from_cfg(cfg, "arch", &fin_opt.arch);
    from_cfg(cfg, "threshold", &fin_opt.threshold);
    from_cfg(cfg, "folds", &fin_opt.folds);
    from_cfg(cfg, "reps", &fin_opt.reps);
    from_cfg(cfg, "seed", &fin_opt.seed);
    from_cfg(cfg, "jobs", &fin_opt.jobs);
    auto* fin_cmd = app.add_subcommand("finalize", "repeated CV under one final configuration");
    fin_cmd->add_option("--input", fin_opt.input, "input spectra CSV")->required();
    fin_cmd->add_option("--out", fin_opt.out_dir, "output directory");
    fin_cmd->add_option("--prep", fin_opt.prep, "preprocessing spec");
    fin_cmd->add_option("--arch", fin_opt.arch, "MLP hidden sizes");
    fin_cmd->add_option("--threshold", fin_opt.threshold, "feature threshold percent");
    fin_cmd->add_option("--folds", fin_opt.folds, "folds");
    fin_cmd->add_option("--reps", fin_opt.reps, "repetitions");
    fin_cmd->add_option("--seed", fin_opt.seed, "master seed (0 = default)");
    fin_cmd->add_option("--jobs", fin_opt.jobs, "worker threads (0 = all)");
    fin_cmd->add_option("--max-epochs", fin_opt.max_epochs, "MLP epoch budget");
    fin_cmd->add_option("--learning-rate", fin_opt.learning_rate, "MLP initial rate");
    fin_cmd->add_option("--lr-decay", fin_opt.lr_decay, "MLP geometric rate decay");
    fin_cmd->add_option("--patience", fin_opt.patience, "MLP early-stopping patience");

    PredictOptions pred_opt;
    from_cfg(cfg, "model", &pred_opt.model);
    from_cfg(cfg, "input", &pred_opt.input);
    from_cfg(cfg, "output", &pred_opt.output);
    auto* pred_cmd = app.add_subcommand("predict", "apply a saved model to spectra");
    pred_cmd->add_option("--model", pred_opt.model, "fitted pipeline JSON")->required();
    pred_cmd->add_option("--input", pred_opt.input, "input spectra CSV")->required();
    pred_cmd->add_option("--output", pred_opt.output, "predictions CSV");

    PlotOptions plot_opt;
    std::string plot_spectra, plot_phase, plot_preds;
    auto* plot_cmd = app.add_subcommand("plot", "render SVG charts from artifacts");
    plot_cmd->add_option("--spectra", plot_spectra, "spectra CSV for the overlay");
    plot_cmd->add_option("--phase-results", plot_phase, "phaseN_results.csv");
    plot_cmd->add_option("--predictions", plot_preds, "predictions CSV");
    plot_cmd->add_option("--out", plot_opt.out_dir, "output directory");

    for (CLI::App* sub : {synth_cmd, pre_cmd, sel_cmd, cv_cmd, tune_cmd, fin_cmd, pred_cmd,
                          plot_cmd})
        sub->add_option("--config", config_path, "JSON file supplying defaults for any flag");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (synth_cmd->parsed()) cmd_synth(synth_opt);
        if (pre_cmd->parsed()) {
            if (!msc_ref_path.empty()) pre_opt.msc_reference = msc_ref_path;
            cmd_preprocess(pre_opt);
        }
        if (sel_cmd->parsed()) {
            if (sel_threshold >= 0) sel_opt.threshold = sel_threshold;
            cmd_select(sel_opt);
        }
        if (cv_cmd->parsed()) cmd_cv(cv_opt);
        if (tune_cmd->parsed()) cmd_tune(tune_opt);
        if (fin_cmd->parsed()) cmd_finalize(fin_opt);
        if (pred_cmd->parsed()) cmd_predict(pred_opt);
        if (plot_cmd->parsed()) {
            if (!plot_spectra.empty()) plot_opt.spectra = plot_spectra;
            if (!plot_phase.empty()) plot_opt.phase_results = plot_phase;
            if (!plot_preds.empty()) plot_opt.predictions = plot_preds;
            cmd_plot(plot_opt);
        }
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace specal::cli
