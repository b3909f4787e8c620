#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specal/matrix.hpp"

#include <nlohmann/json_fwd.hpp>

namespace specal {

/// Zero, one or two hidden layers; an empty list is a plain linear model.
struct MlpArchitecture {
    std::vector<int> hidden;

    void validate() const;
    int total_neurons() const;
    std::string label() const;  // e.g. "10" or "180-10" or "linear"
    bool operator==(const MlpArchitecture&) const = default;
};

struct TrainConfig {
    int max_epochs = 5000;
    double learning_rate = 0.05;
    double lr_decay = 0.999;      // geometric, per epoch
    int patience = 200;           // epochs without validation improvement
    std::uint64_t weight_init_seed = 0;
    double l2_penalty = 1e-6;

    void validate() const;
};

/// Per-feature standardization fitted on the training fold. Zero-variance
/// features keep std 1 (their first-layer weights start at zero).
struct Scaler {
    std::vector<double> mean;
    std::vector<double> stddev;
};

struct MlpModel {
    MlpArchitecture architecture;
    std::vector<Matrix> weights;               // layer l: [out x in]
    std::vector<std::vector<double>> biases;
    Scaler input_scaler;
    double target_mean = 0.0;
    double target_std = 1.0;

    struct EpochRecord {
        double train_rmse = 0.0;
        double validation_rmse = 0.0;
    };
    std::vector<EpochRecord> training_history;
    int best_epoch = -1;
    int epochs_run = 0;
    std::uint64_t seed = 0;

    std::size_t n_inputs() const { return input_scaler.mean.size(); }

    nlohmann::json to_json() const;
    static MlpModel from_json(const nlohmann::json& j);
    /// Canonical byte serialization; equal strings == equal models.
    std::string serialize() const;
};

/// Single-sample inference: scale input, sigmoid hidden layers, affine
/// output, unscale.
double forward(const MlpModel& model, std::span<const double> x);

std::vector<double> predict(const MlpModel& model, const Matrix& x);

/// Mean-squared-error loss in scaled space plus the l2 term (weights only,
/// biases excluded). The finite-difference oracle in the tests perturbs
/// weights against this function.
double loss(const MlpModel& model, const Matrix& x, std::span<const double> y,
            double l2_penalty);

struct MlpGradient {
    std::vector<Matrix> d_weights;
    std::vector<std::vector<double>> d_biases;
};

/// Exact backpropagation gradient of `loss`.
MlpGradient gradient(const MlpModel& model, const Matrix& x, std::span<const double> y,
                     double l2_penalty);

/// Full-batch gradient descent with geometric learning-rate decay; returns
/// the weight snapshot with the best validation RMSE seen. Weights start
/// from seeded uniform(-s, s), s = sqrt(6 / (fan_in + fan_out)).
MlpModel train(const MlpArchitecture& arch, const Matrix& x_train,
               std::span<const double> y_train, const Matrix& x_val,
               std::span<const double> y_val, const TrainConfig& cfg);

}  // namespace specal
