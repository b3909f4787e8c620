#include "specal/mlp.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "specal/errors.hpp"
#include "specal/rng.hpp"

namespace specal {

void MlpArchitecture::validate() const {
    if (hidden.size() > 2)
        throw DataError("at most two hidden layers are supported");
    for (int h : hidden)
        if (h < 1 || h > 200)
            throw DataError("hidden layer sizes must lie in 1..200, got " + std::to_string(h));
}

int MlpArchitecture::total_neurons() const {
    int s = 0;
    for (int h : hidden) s += h;
    return s;
}

std::string MlpArchitecture::label() const {
    if (hidden.empty()) return "linear";
    std::string s;
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        if (i) s += '-';
        s += std::to_string(hidden[i]);
    }
    return s;
}

void TrainConfig::validate() const {
    if (max_epochs < 1) throw DataError("max_epochs must be >= 1");
    if (patience < 1) throw DataError("patience must be >= 1");
    if (!(learning_rate > 0.0)) throw DataError("learning rate must be positive");
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw DataError("lr decay must lie in (0,1]");
    if (l2_penalty < 0.0) throw DataError("l2 penalty must be non-negative");
}

namespace {

inline double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

/// Forward pass over a whole batch in scaled space. `acts` receives the
/// activation of every layer (acts[0] = scaled input).
void forward_batch(const MlpModel& m, const Matrix& x_scaled, std::vector<Matrix>& acts) {
    const std::size_t n = x_scaled.rows();
    acts.clear();
    acts.push_back(x_scaled);
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        const Matrix& w = m.weights[l];
        const auto& b = m.biases[l];
        const Matrix& in = acts.back();
        Matrix out(n, w.rows());
        const bool is_hidden = l + 1 < m.weights.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double* xi = in.row(i);
            double* oi = out.row(i);
            for (std::size_t u = 0; u < w.rows(); ++u) {
                double a = dot(xi, w.row(u), w.cols()) + b[u];
                oi[u] = is_hidden ? sigmoid(a) : a;
            }
        }
        acts.push_back(std::move(out));
    }
}

Matrix scale_inputs(const Scaler& s, const Matrix& x) {
    Matrix z(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            z(i, j) = (x(i, j) - s.mean[j]) / s.stddev[j];
    return z;
}

void check_features(const MlpModel& m, std::size_t cols) {
    if (cols != m.n_inputs())
        throw DataError("mlp: feature count " + std::to_string(cols) + " != model's " +
                        std::to_string(m.n_inputs()));
}

double sum_sq_weights(const MlpModel& m) {
    double s = 0.0;
    for (const auto& w : m.weights)
        for (double v : w.data()) s += v * v;
    return s;
}

}  // namespace

double forward(const MlpModel& model, std::span<const double> x) {
    check_features(model, x.size());
    Matrix row(1, x.size());
    for (std::size_t j = 0; j < x.size(); ++j) row(0, j) = x[j];
    return predict(model, row)[0];
}

std::vector<double> predict(const MlpModel& model, const Matrix& x) {
    check_features(model, x.cols());
    Matrix z = scale_inputs(model.input_scaler, x);
    std::vector<Matrix> acts;
    forward_batch(model, z, acts);
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        out[i] = acts.back()(i, 0) * model.target_std + model.target_mean;
    return out;
}

double loss(const MlpModel& model, const Matrix& x, std::span<const double> y,
            double l2_penalty) {
    check_features(model, x.cols());
    if (x.rows() != y.size()) throw DataError("mlp loss: shape mismatch");
    Matrix z = scale_inputs(model.input_scaler, x);
    std::vector<Matrix> acts;
    forward_batch(model, z, acts);
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double ti = (y[i] - model.target_mean) / model.target_std;
        const double d = acts.back()(i, 0) - ti;
        s += d * d;
    }
    return s / static_cast<double>(x.rows()) + l2_penalty * sum_sq_weights(model);
}

MlpGradient gradient(const MlpModel& model, const Matrix& x, std::span<const double> y,
                     double l2_penalty) {
    check_features(model, x.cols());
    if (x.rows() != y.size()) throw DataError("mlp gradient: shape mismatch");
    const std::size_t n = x.rows();
    Matrix z = scale_inputs(model.input_scaler, x);
    std::vector<Matrix> acts;
    forward_batch(model, z, acts);

    MlpGradient g;
    g.d_weights.resize(model.weights.size());
    g.d_biases.resize(model.weights.size());
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        g.d_weights[l] = Matrix(model.weights[l].rows(), model.weights[l].cols());
        g.d_biases[l].assign(model.biases[l].size(), 0.0);
    }

    // delta starts as dL/d(output) of the MSE term
    Matrix delta(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = (y[i] - model.target_mean) / model.target_std;
        delta(i, 0) = 2.0 / static_cast<double>(n) * (acts.back()(i, 0) - ti);
    }

    for (std::size_t l = model.weights.size(); l-- > 0;) {
        const Matrix& in = acts[l];
        Matrix& dw = g.d_weights[l];
        auto& db = g.d_biases[l];
        for (std::size_t i = 0; i < n; ++i) {
            const double* xi = in.row(i);
            const double* di = delta.row(i);
            for (std::size_t u = 0; u < dw.rows(); ++u) {
                axpy(di[u], xi, dw.row(u), dw.cols());
                db[u] += di[u];
            }
        }
        for (std::size_t a = 0; a < dw.rows() * dw.cols(); ++a)
            dw.data()[a] += 2.0 * l2_penalty * model.weights[l].data()[a];

        if (l == 0) break;
        // propagate: delta_prev = (delta . W) * sigma'(act)
        const Matrix& w = model.weights[l];
        Matrix prev(n, w.cols());
        for (std::size_t i = 0; i < n; ++i) {
            const double* di = delta.row(i);
            double* pi = prev.row(i);
            for (std::size_t j = 0; j < w.cols(); ++j) pi[j] = 0.0;
            for (std::size_t u = 0; u < w.rows(); ++u) axpy(di[u], w.row(u), pi, w.cols());
            const double* ai = acts[l].row(i);
            for (std::size_t j = 0; j < w.cols(); ++j) pi[j] *= ai[j] * (1.0 - ai[j]);
        }
        delta = std::move(prev);
    }
    return g;
}

MlpModel train(const MlpArchitecture& arch, const Matrix& x_train,
               std::span<const double> y_train, const Matrix& x_val,
               std::span<const double> y_val, const TrainConfig& cfg) {
    arch.validate();
    cfg.validate();
    if (x_train.rows() == 0 || x_val.rows() == 0)
        throw DataError("mlp train: empty training or validation set");
    if (x_train.rows() != y_train.size() || x_val.rows() != y_val.size())
        throw DataError("mlp train: row/target count mismatch");
    if (x_train.cols() != x_val.cols())
        throw DataError("mlp train: train/validation feature counts differ");

    const std::size_t n = x_train.rows(), p = x_train.cols();

    MlpModel m;
    m.architecture = arch;
    m.seed = cfg.weight_init_seed;

    m.input_scaler.mean.assign(p, 0.0);
    m.input_scaler.stddev.assign(p, 1.0);
    std::vector<std::uint8_t> zero_var(p, 0);
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x_train(i, j);
        const double mean = s / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            ss += (x_train(i, j) - mean) * (x_train(i, j) - mean);
        const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        m.input_scaler.mean[j] = mean;
        if (sd > 0.0) m.input_scaler.stddev[j] = sd;
        else zero_var[j] = 1;
    }
    m.target_mean = vec_mean(y_train);
    const double tsd = y_train.size() > 1 ? vec_std(y_train) : 0.0;
    m.target_std = tsd > 0.0 ? tsd : 1.0;

    std::vector<std::size_t> sizes{p};
    for (int h : arch.hidden) sizes.push_back(static_cast<std::size_t>(h));
    sizes.push_back(1);

    Rng rng(cfg.weight_init_seed);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        Matrix w(sizes[l + 1], sizes[l]);
        const double s =
            std::sqrt(6.0 / static_cast<double>(sizes[l] + sizes[l + 1]));
        for (double& v : w.data()) v = rng.uniform(-s, s);
        if (l == 0)
            for (std::size_t u = 0; u < w.rows(); ++u)
                for (std::size_t j = 0; j < p; ++j)
                    if (zero_var[j]) w(u, j) = 0.0;
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(sizes[l + 1], 0.0);
    }

    const Matrix z_train = scale_inputs(m.input_scaler, x_train);
    const Matrix z_val = scale_inputs(m.input_scaler, x_val);
    std::vector<double> t_scaled(n);
    for (std::size_t i = 0; i < n; ++i)
        t_scaled[i] = (y_train[i] - m.target_mean) / m.target_std;

    std::vector<Matrix> best_w = m.weights;
    std::vector<std::vector<double>> best_b = m.biases;
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = -1;

    std::vector<Matrix> acts;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const double lr = cfg.learning_rate * std::pow(cfg.lr_decay, epoch);

        forward_batch(m, z_train, acts);
        double train_mse = 0.0;
        Matrix delta(n, 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = acts.back()(i, 0) - t_scaled[i];
            train_mse += d * d;
            delta(i, 0) = 2.0 / static_cast<double>(n) * d;
        }
        train_mse /= static_cast<double>(n);
        if (!std::isfinite(train_mse))
            throw DivergenceError("mlp train: loss diverged at epoch " + std::to_string(epoch),
                                  epoch);

        // backprop and in-place update, output layer downwards
        for (std::size_t l = m.weights.size(); l-- > 0;) {
            const Matrix& in = acts[l];
            Matrix& w = m.weights[l];
            auto& b = m.biases[l];
            Matrix dw(w.rows(), w.cols());
            std::vector<double> db(b.size(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double* xi = in.row(i);
                const double* di = delta.row(i);
                for (std::size_t u = 0; u < w.rows(); ++u) {
                    axpy(di[u], xi, dw.row(u), w.cols());
                    db[u] += di[u];
                }
            }
            Matrix prev;
            if (l > 0) {
                prev = Matrix(n, w.cols());
                for (std::size_t i = 0; i < n; ++i) {
                    const double* di = delta.row(i);
                    double* pi = prev.row(i);
                    for (std::size_t u = 0; u < w.rows(); ++u)
                        axpy(di[u], w.row(u), pi, w.cols());
                    const double* ai = acts[l].row(i);
                    for (std::size_t j = 0; j < w.cols(); ++j) pi[j] *= ai[j] * (1.0 - ai[j]);
                }
            }
            for (std::size_t a = 0; a < w.rows() * w.cols(); ++a)
                w.data()[a] -= lr * (dw.data()[a] + 2.0 * cfg.l2_penalty * w.data()[a]);
            for (std::size_t u = 0; u < b.size(); ++u) b[u] -= lr * db[u];
            if (l > 0) delta = std::move(prev);
        }

        // validation rmse in target units
        forward_batch(m, z_val, acts);
        double val_se = 0.0;
        for (std::size_t i = 0; i < z_val.rows(); ++i) {
            const double pred = acts.back()(i, 0) * m.target_std + m.target_mean;
            val_se += (pred - y_val[i]) * (pred - y_val[i]);
        }
        const double val_rmse = std::sqrt(val_se / static_cast<double>(z_val.rows()));
        if (!std::isfinite(val_rmse))
            throw DivergenceError("mlp train: validation diverged at epoch " +
                                      std::to_string(epoch),
                                  epoch);
        m.training_history.push_back(
            {std::sqrt(train_mse) * m.target_std, val_rmse});
        m.epochs_run = epoch + 1;

        if (val_rmse < best_val) {
            best_val = val_rmse;
            best_epoch = epoch;
            best_w = m.weights;
            best_b = m.biases;
        } else if (epoch - best_epoch >= cfg.patience) {
            break;
        }
    }

    m.weights = std::move(best_w);
    m.biases = std::move(best_b);
    m.best_epoch = best_epoch;
    return m;
}

nlohmann::json MlpModel::to_json() const {
    nlohmann::json j;
    j["schema"] = "specal.mlp/1";
    j["architecture"] = architecture.hidden;
    j["input_scaler"] = {{"mean", input_scaler.mean}, {"stddev", input_scaler.stddev}};
    j["target_scaler"] = {{"mean", target_mean}, {"stddev", target_std}};
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < weights.size(); ++l) {
        layers.push_back({{"rows", weights[l].rows()},
                          {"cols", weights[l].cols()},
                          {"weights", weights[l].data()},  // row-major
                          {"bias", biases[l]}});
    }
    j["layers"] = layers;
    j["training"] = {{"seed", seed},
                     {"epochs_run", epochs_run},
                     {"best_epoch", best_epoch}};
    return j;
}

MlpModel MlpModel::from_json(const nlohmann::json& j) {
    if (j.at("schema").get<std::string>() != "specal.mlp/1")
        throw DataError("unsupported MLP model schema");
    MlpModel m;
    m.architecture.hidden = j.at("architecture").get<std::vector<int>>();
    m.input_scaler.mean = j.at("input_scaler").at("mean").get<std::vector<double>>();
    m.input_scaler.stddev = j.at("input_scaler").at("stddev").get<std::vector<double>>();
    m.target_mean = j.at("target_scaler").at("mean").get<double>();
    m.target_std = j.at("target_scaler").at("stddev").get<double>();
    for (const auto& layer : j.at("layers")) {
        Matrix w(layer.at("rows").get<std::size_t>(), layer.at("cols").get<std::size_t>());
        w.data() = layer.at("weights").get<std::vector<double>>();
        m.weights.push_back(std::move(w));
        m.biases.push_back(layer.at("bias").get<std::vector<double>>());
    }
    m.seed = j.at("training").at("seed").get<std::uint64_t>();
    m.epochs_run = j.at("training").at("epochs_run").get<int>();
    m.best_epoch = j.at("training").at("best_epoch").get<int>();
    return m;
}

std::string MlpModel::serialize() const { return to_json().dump(); }

}  // namespace specal
