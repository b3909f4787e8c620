#pragma once

#include <stdexcept>
#include <string>

namespace specal {

/// Problems with input data or configuration (bad files, shape mismatches,
/// infeasible plans). CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failures (rank exhaustion, divergence, singular solves).
/// CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rank exhaustion during latent-variable extraction; carries how many
/// components were completed before the residual vanished.
class RankExhaustedError : public NumericError {
public:
    RankExhaustedError(const std::string& msg, int completed)
        : NumericError(msg), components_completed(completed) {}
    int components_completed;
};

/// Training loss became non-finite.
class DivergenceError : public NumericError {
public:
    DivergenceError(const std::string& msg, int epoch)
        : NumericError(msg), epoch(epoch) {}
    int epoch;
};

}  // namespace specal
