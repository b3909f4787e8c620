#include "specal/cv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "specal/errors.hpp"
#include "specal/parallel.hpp"
#include "specal/rng.hpp"
#include "specal/util.hpp"

namespace specal {

namespace {
constexpr std::uint64_t kTagModelSeed = 0x4d4f444c;
}

std::string model_label(const ModelSpec& spec) {
    if (std::holds_alternative<PlsSpec>(spec))
        return "pls" + std::to_string(std::get<PlsSpec>(spec).n_components);
    return "mlp" + std::get<MlpSpec>(spec).architecture.label();
}

std::string PipelineConfig::label() const {
    return model_label(model) + "/" + preprocess.label() + "/t" +
           fmt_double(threshold_percent);
}

nlohmann::json PipelineConfig::to_json() const {
    nlohmann::json j;
    j["preprocess"] = preprocess.to_json();
    j["threshold_percent"] = threshold_percent;
    if (std::holds_alternative<PlsSpec>(model)) {
        j["model"] = {{"kind", "pls"},
                      {"n_components", std::get<PlsSpec>(model).n_components}};
    } else {
        const auto& m = std::get<MlpSpec>(model);
        j["model"] = {{"kind", "mlp"},
                      {"architecture", m.architecture.hidden},
                      {"max_epochs", m.train.max_epochs},
                      {"learning_rate", m.train.learning_rate},
                      {"lr_decay", m.train.lr_decay},
                      {"patience", m.train.patience},
                      {"l2_penalty", m.train.l2_penalty}};
    }
    return j;
}

const char* subset_name(Subset s) {
    switch (s) {
        case Subset::Train: return "train";
        case Subset::Validation: return "validation";
        case Subset::Test: return "test";
    }
    return "?";
}

std::vector<double> FittedPipeline::predict_rows(const Matrix& preprocessed,
                                                 const std::vector<std::size_t>& rows) const {
    Matrix x = preprocessed.take_rows(rows).take_cols(retained);
    if (std::holds_alternative<PlsModel>(model))
        return predict_pls(std::get<PlsModel>(model), x);
    return predict(std::get<MlpModel>(model), x);
}

std::string FittedPipeline::serialize() const {
    nlohmann::json j;
    j["config"] = config.to_json();
    j["retained"] = retained;
    if (msc) j["msc_reference"] = msc->values;
    if (std::holds_alternative<PlsModel>(model))
        j["model"] = std::get<PlsModel>(model).to_json();
    else
        j["model"] = std::get<MlpModel>(model).to_json();
    return j.dump();
}

namespace {

TrainConfig effective_train_config(const MlpSpec& spec, std::uint64_t seed) {
    TrainConfig cfg = spec.train;
    cfg.weight_init_seed = seed;
    if (spec.auto_rate && !spec.architecture.hidden.empty()) {
        const int last = spec.architecture.hidden.back();
        cfg.learning_rate = std::min(cfg.learning_rate, 1.5 / static_cast<double>(last));
    }
    return cfg;
}

}  // namespace

FittedPipeline fit_fold(const SpectraSet& data, const Matrix* preprocessed,
                        const FoldAssignment& fa, const PipelineConfig& cfg,
                        std::uint64_t master_seed) {
    cfg.preprocess.validate();
    FittedPipeline fit;
    fit.config = cfg;

    Matrix local;
    const Matrix* x = preprocessed;
    if (cfg.preprocess.technique == Technique::Msc) {
        // reference from the training fold only, applied to all rows
        fit.msc = msc_fit(data.samples.take_rows(fa.train_idx));
        local = apply_matrix(cfg.preprocess, data.samples, &*fit.msc, 1);
        x = &local;
    } else if (x == nullptr) {
        local = apply_matrix(cfg.preprocess, data.samples, nullptr, 1);
        x = &local;
    }

    Matrix x_train = x->take_rows(fa.train_idx);
    std::vector<double> y_train;
    y_train.reserve(fa.train_idx.size());
    for (std::size_t i : fa.train_idx) y_train.push_back(data.targets[i]);

    FeatureRanking ranking = rank_by_correlation(x_train, y_train, 1);
    fit.retained = select_threshold(ranking, cfg.threshold_percent).retained;
    x_train = x_train.take_cols(fit.retained);

    const std::uint64_t model_seed =
        derive_seed(master_seed, kTagModelSeed, static_cast<std::uint64_t>(fa.repetition),
                    static_cast<std::uint64_t>(fa.fold));

    if (std::holds_alternative<PlsSpec>(cfg.model)) {
        fit.model = fit_pls(x_train, y_train, std::get<PlsSpec>(cfg.model).n_components);
    } else {
        const auto& spec = std::get<MlpSpec>(cfg.model);
        Matrix x_val = x->take_rows(fa.validation_idx).take_cols(fit.retained);
        std::vector<double> y_val;
        y_val.reserve(fa.validation_idx.size());
        for (std::size_t i : fa.validation_idx) y_val.push_back(data.targets[i]);
        fit.model = train(spec.architecture, x_train, y_train, x_val, y_val,
                          effective_train_config(spec, model_seed));
    }
    return fit;
}

namespace {

std::vector<double> subset_targets(const SpectraSet& data, const std::vector<std::size_t>& idx) {
    std::vector<double> y;
    y.reserve(idx.size());
    for (std::size_t i : idx) y.push_back(data.targets[i]);
    return y;
}

/// Evaluates one fold assignment into (up to) three records.
void run_cell(const SpectraSet& data, const Matrix* pre, const FoldAssignment& fa,
              const PipelineConfig& cfg, std::uint64_t master_seed,
              std::vector<CvRecord>* records, std::optional<CvCellFailure>* failure) {
    try {
        FittedPipeline fit = fit_fold(data, pre, fa, cfg, master_seed);
        const Matrix* x = pre;
        Matrix local;
        if (cfg.preprocess.technique == Technique::Msc) {
            local = apply_matrix(cfg.preprocess, data.samples, &*fit.msc, 1);
            x = &local;
        }
        const std::pair<Subset, const std::vector<std::size_t>*> parts[] = {
            {Subset::Train, &fa.train_idx},
            {Subset::Validation, &fa.validation_idx},
            {Subset::Test, &fa.test_idx},
        };
        for (const auto& [subset, idx] : parts) {
            CvRecord rec;
            rec.repetition = fa.repetition;
            rec.fold = fa.fold;
            rec.subset = subset;
            rec.metrics = compute_metrics(subset_targets(data, *idx),
                                          fit.predict_rows(*x, *idx));
            records->push_back(rec);
        }
    } catch (const std::exception& e) {
        *failure = CvCellFailure{fa.repetition, fa.fold, e.what()};
        records->clear();
    }
}

CvReport run_impl(const SpectraSet& data, const SplitPlan& plan, const PipelineConfig& cfg,
                  int jobs, bool serial_reference) {
    data.validate();
    cfg.preprocess.validate();
    const auto assignments = make_folds(data.n_samples(), plan);

    // Per-sample transforms share one precomputed matrix across cells; MSC
    // depends on the training fold and is redone inside each cell.
    Matrix pre;
    const Matrix* pre_ptr = nullptr;
    if (cfg.preprocess.technique != Technique::Msc) {
        if (cfg.preprocess.technique == Technique::SavGol && !data.axis.uniform_spacing())
            throw DataError("savgol requires a uniformly spaced wavelength axis");
        pre = apply_matrix(cfg.preprocess, data.samples, nullptr, serial_reference ? 1 : jobs);
        pre_ptr = &pre;
    }

    std::vector<std::vector<CvRecord>> cell_records(assignments.size());
    std::vector<std::optional<CvCellFailure>> cell_failures(assignments.size());
    auto body = [&](std::size_t c) {
        run_cell(data, pre_ptr, assignments[c], cfg, plan.seed, &cell_records[c],
                 &cell_failures[c]);
    };
    if (serial_reference) {
        for (std::size_t c = 0; c < assignments.size(); ++c) body(c);
    } else {
        parallel_for(assignments.size(), jobs, body);
    }

    CvReport report;
    for (std::size_t c = 0; c < assignments.size(); ++c) {
        for (const auto& r : cell_records[c]) report.records.push_back(r);
        if (cell_failures[c]) report.failures.push_back(*cell_failures[c]);
    }
    std::sort(report.records.begin(), report.records.end(), [](const auto& a, const auto& b) {
        return std::tie(a.repetition, a.fold, a.subset) <
               std::tie(b.repetition, b.fold, b.subset);
    });
    if (report.records.empty()) {
        std::string detail = report.failures.empty() ? "no cells" : report.failures[0].message;
        throw NumericError("repeated CV: every cell failed (first: " + detail + ")");
    }
    return report;
}

}  // namespace

CvReport run_repeated_cv(const SpectraSet& data, const SplitPlan& plan,
                         const PipelineConfig& cfg, int jobs) {
    return run_impl(data, plan, cfg, jobs, false);
}

namespace reference {
CvReport run_repeated_cv_serial(const SpectraSet& data, const SplitPlan& plan,
                                const PipelineConfig& cfg) {
    return run_impl(data, plan, cfg, 1, true);
}
}  // namespace reference

std::vector<double> CvReport::collect(Subset subset, double Metrics::* field) const {
    std::vector<double> out;
    for (const auto& r : records)
        if (r.subset == subset) out.push_back(r.metrics.*field);
    return out;
}

Aggregate CvReport::aggregate(Subset subset, double Metrics::* field) const {
    const auto values = collect(subset, field);
    Aggregate a;
    a.count = values.size();
    if (values.empty()) return a;
    a.mean = vec_mean(values);
    a.stddev = values.size() > 1 ? vec_std(values) : 0.0;
    a.min = *std::min_element(values.begin(), values.end());
    a.max = *std::max_element(values.begin(), values.end());
    return a;
}

void CvReport::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << "rep,fold,subset,r2,mae,rmse,f,p\n";
    for (const auto& r : records) {
        out << r.repetition << ',' << r.fold << ',' << subset_name(r.subset) << ','
            << fmt_double(r.metrics.r_squared) << ',' << fmt_double(r.metrics.mae) << ','
            << fmt_double(r.metrics.rmse) << ',' << fmt_double(r.metrics.f_statistic) << ','
            << fmt_double(r.metrics.p_value) << "\n";
    }
}

nlohmann::json CvReport::to_json() const {
    nlohmann::json j;
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : records) {
        recs.push_back({{"rep", r.repetition},
                        {"fold", r.fold},
                        {"subset", subset_name(r.subset)},
                        {"r2", r.metrics.r_squared},
                        {"mae", r.metrics.mae},
                        {"rmse", r.metrics.rmse},
                        {"f", r.metrics.f_statistic},
                        {"p", r.metrics.p_value},
                        {"n", r.metrics.n}});
    }
    j["records"] = recs;
    nlohmann::json aggs;
    for (Subset s : {Subset::Train, Subset::Validation, Subset::Test}) {
        const Aggregate a = aggregate(s);
        aggs[subset_name(s)] = {{"mean_r2", a.mean},
                                {"std_r2", a.stddev},
                                {"min_r2", a.min},
                                {"max_r2", a.max},
                                {"cells", a.count}};
    }
    j["aggregates"] = aggs;
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& f : failures)
        fails.push_back({{"rep", f.repetition}, {"fold", f.fold}, {"message", f.message}});
    j["failures"] = fails;
    return j;
}

}  // namespace specal
