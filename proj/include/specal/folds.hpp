#pragma once

#include <cstdint>
#include <vector>

namespace specal {

constexpr std::uint64_t kDefaultSeed = 101;

/// Repeated k-fold split plan. validation_fraction is the share of the
/// non-test pool moved to the validation subset (2/9 reproduces a 70/20/10
/// split for 10 folds).
struct SplitPlan {
    int n_folds = 10;
    int n_repetitions = 50;
    double validation_fraction = 2.0 / 9.0;
    std::uint64_t seed = kDefaultSeed;

    void validate() const;
};

struct FoldAssignment {
    int repetition = 0;
    int fold = 0;
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> validation_idx;
    std::vector<std::size_t> test_idx;
};

/// Builds n_folds x n_repetitions assignments, repetition-major. Each
/// repetition reshuffles all samples with a seed derived from plan.seed;
/// the first (n mod k) folds receive one extra sample. Within a repetition
/// every fold serves once as test; the remaining pool is reshuffled (per
/// fold) and validation_fraction of it becomes the validation subset.
std::vector<FoldAssignment> make_folds(std::size_t n_samples, const SplitPlan& plan);

}  // namespace specal
