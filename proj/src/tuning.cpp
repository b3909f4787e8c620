#include "specal/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "specal/errors.hpp"
#include "specal/util.hpp"

namespace specal {

SplitPlan GridSpec::plan() const {
    SplitPlan p;
    p.n_folds = n_folds;
    p.n_repetitions = n_repetitions;
    p.validation_fraction = validation_fraction;
    p.seed = master_seed;
    return p;
}

void GridSpec::validate() const {
    plan().validate();
    if (techniques.empty() || phase1_thresholds.empty() || phase3_thresholds.empty() ||
        savgol_widths.empty() || savgol_poly_orders.empty() || savgol_deriv_orders.empty() ||
        architectures.empty())
        throw DataError("grid: every axis must be non-empty");
    for (double t : phase1_thresholds)
        if (!(t > 0.0) || t > 100.0) throw DataError("grid: thresholds must lie in (0,100]");
    for (double t : phase3_thresholds)
        if (!(t > 0.0) || t > 100.0) throw DataError("grid: thresholds must lie in (0,100]");
    for (int w : savgol_widths)
        if (w < 3 || w > 101 || w % 2 == 0)
            throw DataError("grid: savgol widths must be odd within 3..101");
    for (int p : savgol_poly_orders)
        if (p < 1 || p > 5) throw DataError("grid: poly orders must lie in 1..5");
    for (int d : savgol_deriv_orders)
        if (d < 1 || d > 5) throw DataError("grid: deriv orders must lie in 1..5");
    for (const auto& a : architectures) {
        a.validate();
        if (a.hidden.empty())
            throw DataError("grid: phase-2 architectures need at least one hidden layer");
    }
    phase1_savgol.validate();
    mlp_train.validate();
}

GridSpec make_desk_grid(std::uint64_t seed) {
    GridSpec g;
    g.master_seed = seed;
    g.mlp_train.max_epochs = 150;
    g.mlp_train.learning_rate = 0.15;
    g.mlp_train.lr_decay = 0.998;
    g.mlp_train.patience = 25;
    return g;
}

GridSpec make_paper_grid(std::uint64_t seed) {
    GridSpec g = make_desk_grid(seed);
    g.n_repetitions = 50;
    g.phase1_thresholds.clear();
    for (int t = 10; t <= 100; t += 10) g.phase1_thresholds.push_back(t);
    g.phase3_thresholds.clear();
    for (int t = 1; t <= 100; ++t) g.phase3_thresholds.push_back(t);
    g.savgol_widths.clear();
    for (int w = 3; w <= 101; w += 2) g.savgol_widths.push_back(w);
    g.architectures.clear();
    for (int a = 0; a <= 200; a += 10) {
        for (int b = 0; b <= 200; b += 10) {
            if (a == 0 && b == 0) continue;
            MlpArchitecture arch;
            if (a > 0) arch.hidden.push_back(a);
            if (b > 0) arch.hidden.push_back(b);
            g.architectures.push_back(arch);
        }
    }
    // remove duplicate single-layer entries ([a,0] and [0,a] collapse)
    std::sort(g.architectures.begin(), g.architectures.end(),
              [](const auto& x, const auto& y) { return x.hidden < y.hidden; });
    g.architectures.erase(std::unique(g.architectures.begin(), g.architectures.end()),
                          g.architectures.end());
    return g;
}

namespace {

CellSummary evaluate_cell(const SpectraSet& data, const SplitPlan& plan,
                          const PipelineConfig& cfg, int jobs) {
    CellSummary cell;
    cell.config = cfg;
    try {
        CvReport report = run_repeated_cv(data, plan, cfg, jobs);
        cell.validation_samples = report.collect(Subset::Validation);
        cell.validation_r2 = report.aggregate(Subset::Validation);
        cell.failures = report.failures.size();
    } catch (const std::exception&) {
        cell.failures = static_cast<std::size_t>(plan.n_folds) *
                        static_cast<std::size_t>(plan.n_repetitions);
    }
    return cell;
}

std::vector<CellSummary> evaluate_cells(const SpectraSet& data, const SplitPlan& plan,
                                        const std::vector<PipelineConfig>& configs, int jobs,
                                        const ProgressFn& progress, const std::string& phase) {
    std::vector<CellSummary> cells;
    cells.reserve(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        cells.push_back(evaluate_cell(data, plan, configs[i], jobs));
        if (progress) {
            const auto& c = cells.back();
            std::ostringstream msg;
            msg << '[' << phase << ' ' << (i + 1) << '/' << configs.size() << "] "
                << configs[i].label();
            if (c.ok())
                msg << "  mean val R2 " << fmt_double(c.validation_r2.mean);
            else
                msg << "  FAILED";
            progress(msg.str());
        }
    }
    return cells;
}

std::size_t best_by_mean(const std::vector<CellSummary>& cells) {
    std::size_t best = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i].ok()) continue;
        if (best == cells.size() || cells[i].validation_r2.mean > cells[best].validation_r2.mean)
            best = i;
    }
    if (best == cells.size()) throw NumericError("grid phase: every cell failed");
    return best;
}

PreprocessConfig prep_for(Technique t, const SavGolParams& sg) {
    PreprocessConfig cfg;
    cfg.technique = t;
    if (t == Technique::SavGol) cfg.savgol = sg;
    return cfg;
}

}  // namespace

PhaseResult phase1(const SpectraSet& data, const GridSpec& grid, int jobs,
                   const ProgressFn& progress) {
    grid.validate();
    std::vector<PipelineConfig> configs;
    const std::vector<ModelSpec> models{
        PlsSpec{grid.pls_components},
        MlpSpec{grid.phase1_architecture, grid.mlp_train, true}};
    for (const auto& model : models)
        for (Technique t : grid.techniques)
            for (double thr : grid.phase1_thresholds)
                configs.push_back({prep_for(t, grid.phase1_savgol), thr, model});

    PhaseResult res;
    res.phase = "phase1";
    res.cells = evaluate_cells(data, grid.plan(), configs, jobs, progress, res.phase);
    res.winner_index = best_by_mean(res.cells);
    return res;
}

PhaseResult savgol_search(const SpectraSet& data, const GridSpec& grid, int jobs,
                          const ProgressFn& progress) {
    grid.validate();
    // (poly, deriv) pairs with d <= p; widths must satisfy p < w
    std::vector<std::pair<int, int>> pairs;
    for (int p : grid.savgol_poly_orders)
        for (int d : grid.savgol_deriv_orders)
            if (d <= p) pairs.emplace_back(p, d);

    PhaseResult res;
    res.phase = "savgol";
    const ModelSpec model = MlpSpec{grid.phase1_architecture, grid.mlp_train, true};

    std::vector<std::size_t> best_of_pair;  // index into res.cells
    for (const auto& [p, d] : pairs) {
        std::vector<PipelineConfig> configs;
        for (int w : grid.savgol_widths) {
            if (p >= w) continue;  // polynomial not identifiable in the window
            configs.push_back({prep_for(Technique::SavGol, {w, p, d}), 100.0, model});
        }
        const auto cells = evaluate_cells(data, grid.plan(), configs, jobs, progress,
                                          "savgol p=" + std::to_string(p) +
                                              " d=" + std::to_string(d));
        std::size_t local_best = cells.size();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            res.cells.push_back(cells[i]);
            if (!cells[i].ok()) continue;
            if (local_best == cells.size() ||
                cells[i].validation_r2.mean > cells[local_best].validation_r2.mean)
                local_best = i;
        }
        if (local_best < cells.size())
            best_of_pair.push_back(res.cells.size() - cells.size() + local_best);
    }
    if (best_of_pair.empty()) throw NumericError("savgol search: every cell failed");

    // Tukey comparison across the best-width configurations
    if (best_of_pair.size() >= 2) {
        std::vector<std::pair<std::string, std::vector<double>>> groups;
        for (std::size_t idx : best_of_pair)
            groups.emplace_back(res.cells[idx].config.label(),
                                res.cells[idx].validation_samples);
        res.tukey = tukey_hsd(groups, grid.tukey_alpha);
    }

    // winner: inside the letter group of the best mean, greatest mean then
    // smallest std
    std::size_t best_pos = 0;
    for (std::size_t i = 1; i < best_of_pair.size(); ++i)
        if (res.cells[best_of_pair[i]].validation_r2.mean >
            res.cells[best_of_pair[best_pos]].validation_r2.mean)
            best_pos = i;
    std::size_t winner_pos = best_pos;
    if (res.tukey) {
        for (std::size_t i = 0; i < best_of_pair.size(); ++i) {
            if (!res.tukey->share_letter(i, best_pos)) continue;
            const auto& a = res.cells[best_of_pair[i]].validation_r2;
            const auto& b = res.cells[best_of_pair[winner_pos]].validation_r2;
            if (a.mean > b.mean || (a.mean == b.mean && a.stddev < b.stddev)) winner_pos = i;
        }
    }
    res.winner_index = best_of_pair[winner_pos];
    return res;
}

std::size_t pick_phase2_winner(const std::vector<CellSummary>& cells,
                               const TukeyResult& tukey) {
    // tukey groups must align with the ok-cells in order
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].ok()) ok.push_back(i);
    if (ok.empty()) throw NumericError("phase2: every cell failed");

    std::size_t best = 0;
    for (std::size_t g = 1; g < ok.size(); ++g)
        if (cells[ok[g]].validation_r2.mean > cells[ok[best]].validation_r2.mean) best = g;

    auto complexity = [&](std::size_t g) {
        const auto& arch = std::get<MlpSpec>(cells[ok[g]].config.model).architecture;
        return std::make_tuple(arch.total_neurons(), arch.hidden.size(), arch.hidden);
    };
    std::size_t winner = best;
    for (std::size_t g = 0; g < ok.size(); ++g) {
        const bool tied = g == best || tukey.share_letter(g, best);
        if (tied && complexity(g) < complexity(winner)) winner = g;
    }
    return ok[winner];
}

PhaseResult phase2(const SpectraSet& data, const GridSpec& grid, const PreprocessConfig& prep,
                   int jobs, const ProgressFn& progress) {
    grid.validate();
    std::vector<PipelineConfig> configs;
    for (const auto& arch : grid.architectures)
        configs.push_back({prep, 100.0, MlpSpec{arch, grid.mlp_train, true}});

    PhaseResult res;
    res.phase = "phase2";
    res.cells = evaluate_cells(data, grid.plan(), configs, jobs, progress, res.phase);

    std::vector<std::pair<std::string, std::vector<double>>> groups;
    for (const auto& c : res.cells)
        if (c.ok()) groups.emplace_back(c.config.label(), c.validation_samples);
    if (groups.size() >= 2) {
        res.tukey = tukey_hsd(groups, grid.tukey_alpha);
        res.winner_index = pick_phase2_winner(res.cells, *res.tukey);
    } else {
        res.winner_index = best_by_mean(res.cells);
    }
    return res;
}

std::size_t pick_phase3_winner(const std::vector<CellSummary>& cells) {
    std::size_t best = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i].ok()) continue;
        if (best == cells.size() || cells[i].validation_r2.mean > cells[best].validation_r2.mean)
            best = i;
    }
    if (best == cells.size()) throw NumericError("phase3: every cell failed");
    const double floor = cells[best].validation_r2.mean - cells[best].validation_r2.stddev;

    std::size_t winner = best;
    double winner_threshold = cells[best].config.threshold_percent;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i].ok() || cells[i].validation_r2.mean < floor) continue;
        if (cells[i].config.threshold_percent < winner_threshold) {
            winner = i;
            winner_threshold = cells[i].config.threshold_percent;
        }
    }
    return winner;
}

PhaseResult phase3(const SpectraSet& data, const GridSpec& grid, const PreprocessConfig& prep,
                   const MlpArchitecture& arch, int jobs, const ProgressFn& progress) {
    grid.validate();
    std::vector<PipelineConfig> configs;
    for (double thr : grid.phase3_thresholds)
        configs.push_back({prep, thr, MlpSpec{arch, grid.mlp_train, true}});

    PhaseResult res;
    res.phase = "phase3";
    res.cells = evaluate_cells(data, grid.plan(), configs, jobs, progress, res.phase);
    res.winner_index = pick_phase3_winner(res.cells);
    return res;
}

namespace {

void append_config_columns(std::ostream& out, const PipelineConfig& cfg) {
    out << cfg.label() << ',' << static_cast<int>(cfg.preprocess.technique) << ',';
    if (cfg.preprocess.technique == Technique::SavGol)
        out << cfg.preprocess.savgol.width << ',' << cfg.preprocess.savgol.poly_order << ','
            << cfg.preprocess.savgol.deriv_order;
    else
        out << ",,";
    out << ',' << fmt_double(cfg.threshold_percent) << ',' << model_label(cfg.model);
}

}  // namespace

void PhaseResult::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << "label,technique,width,poly,deriv,threshold,model,"
           "mean_val_r2,std_val_r2,min_val_r2,max_val_r2,n_cells,n_failures,winner\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        append_config_columns(out, c.config);
        out << ',' << fmt_double(c.validation_r2.mean) << ',' << fmt_double(c.validation_r2.stddev)
            << ',' << fmt_double(c.validation_r2.min) << ',' << fmt_double(c.validation_r2.max)
            << ',' << c.validation_r2.count << ',' << c.failures << ','
            << (i == winner_index ? 1 : 0) << "\n";
    }
}

void PhaseResult::write_winner_json(const std::filesystem::path& path) const {
    const auto& w = winner();
    nlohmann::json j;
    j["phase"] = phase;
    j["config"] = w.config.to_json();
    j["mean_validation_r2"] = w.validation_r2.mean;
    j["std_validation_r2"] = w.validation_r2.stddev;
    j["cells_evaluated"] = cells.size();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

namespace {

const char* ordinal_name(int v) {
    switch (v) {
        case 1: return "First";
        case 2: return "Second";
        case 3: return "Third";
        case 4: return "Fourth";
        case 5: return "Fifth";
    }
    return "?";
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::string format_savgol_table(const PhaseResult& result) {
    if (!result.tukey) throw DataError("savgol table needs a Tukey comparison");
    std::ostringstream out;
    out << "Polynomial degree\tDerivative order\twidth\tmean +- std\tmin\tmax\tTukey HSD\n";
    for (std::size_t g = 0; g < result.tukey->groups.size(); ++g) {
        const auto& label = result.tukey->groups[g].label;
        const CellSummary* cell = nullptr;
        for (const auto& c : result.cells)
            if (c.config.label() == label) {
                cell = &c;
                break;
            }
        if (!cell) continue;
        const auto& sg = cell->config.preprocess.savgol;
        out << ordinal_name(sg.poly_order) << '\t' << ordinal_name(sg.deriv_order) << '\t'
            << sg.width << '\t' << fixed4(cell->validation_r2.mean) << " +- "
            << fixed4(cell->validation_r2.stddev) << '\t' << fixed4(cell->validation_r2.min)
            << '\t' << fixed4(cell->validation_r2.max) << '\t' << result.tukey->letters[g]
            << "\n";
    }
    out << "Rows with different letters differ significantly according to Tukey HSD "
           "at p < "
        << fmt_double(result.tukey->alpha) << ".\n";
    return out.str();
}

FinalReport finalize(const SpectraSet& data, const SplitPlan& plan, const PipelineConfig& cfg,
                     int jobs) {
    FinalReport rep;
    rep.config = cfg;
    rep.cv = run_repeated_cv(data, plan, cfg, jobs);

    const auto assignments = make_folds(data.n_samples(), plan);
    for (Subset s : {Subset::Train, Subset::Validation, Subset::Test}) {
        FinalReport::SubsetRow row;
        row.subset = subset_name(s);
        switch (s) {
            case Subset::Train: row.n = assignments[0].train_idx.size(); break;
            case Subset::Validation: row.n = assignments[0].validation_idx.size(); break;
            case Subset::Test: row.n = assignments[0].test_idx.size(); break;
        }
        row.r2 = rep.cv.aggregate(s, &Metrics::r_squared);
        row.mae = rep.cv.aggregate(s, &Metrics::mae);
        row.rmse = rep.cv.aggregate(s, &Metrics::rmse);
        row.f = rep.cv.aggregate(s, &Metrics::f_statistic);
        auto ps = rep.cv.collect(s, &Metrics::p_value);
        std::sort(ps.begin(), ps.end());
        row.median_p = ps.empty() ? 1.0 : ps[ps.size() / 2];
        rep.rows.push_back(row);
    }

    // representative pipeline: the cell with the best test R^2
    const CvRecord* best = nullptr;
    for (const auto& r : rep.cv.records)
        if (r.subset == Subset::Test && (!best || r.metrics.r_squared > best->metrics.r_squared))
            best = &r;
    if (best) {
        for (const auto& fa : assignments) {
            if (fa.repetition != best->repetition || fa.fold != best->fold) continue;
            FittedPipeline fit = fit_fold(data, nullptr, fa, cfg, plan.seed);
            rep.model_json = fit.serialize();
            rep.model_repetition = fa.repetition;
            rep.model_fold = fa.fold;
            Matrix pre = cfg.preprocess.technique == Technique::Msc
                             ? apply_matrix(cfg.preprocess, data.samples, &*fit.msc, jobs)
                             : apply_matrix(cfg.preprocess, data.samples, nullptr, jobs);
            rep.rep_predicted = fit.predict_rows(pre, fa.test_idx);
            for (std::size_t i : fa.test_idx) rep.rep_actual.push_back(data.targets[i]);
            break;
        }
    }
    return rep;
}

std::string FinalReport::format_table() const {
    auto fmt_p = [](double p) {
        return p < 0.01 ? std::string("<0.01") : fixed4(p);
    };
    std::ostringstream out;
    out << "metric";
    for (const auto& r : rows) out << '\t' << r.subset;
    out << "\nn samples";
    for (const auto& r : rows) out << '\t' << r.n;
    out << "\nR-squared";
    for (const auto& r : rows) out << '\t' << fixed4(r.r2.mean);
    out << "\nMean Absolute Error";
    for (const auto& r : rows) out << '\t' << fixed4(r.mae.mean);
    out << "\nRoot Mean Squared Error";
    for (const auto& r : rows) out << '\t' << fixed4(r.rmse.mean);
    out << "\nF-statistic vs. constant model";
    for (const auto& r : rows) out << '\t' << fmt_double(std::round(r.f.mean));
    out << "\np-value";
    for (const auto& r : rows) out << '\t' << fmt_p(r.median_p);
    out << "\n";
    return out.str();
}

nlohmann::json FinalReport::to_json() const {
    nlohmann::json j;
    j["config"] = config.to_json();
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"subset", r.subset},
                             {"n", r.n},
                             {"r2_mean", r.r2.mean},
                             {"r2_std", r.r2.stddev},
                             {"mae_mean", r.mae.mean},
                             {"rmse_mean", r.rmse.mean},
                             {"f_mean", r.f.mean},
                             {"median_p", r.median_p}});
    }
    j["subsets"] = rows_json;
    j["representative_model"] = {{"repetition", model_repetition}, {"fold", model_fold}};
    return j;
}

}  // namespace specal
