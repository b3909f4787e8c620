#include "specal/folds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "specal/errors.hpp"
#include "specal/rng.hpp"

namespace specal {

namespace {
constexpr std::uint64_t kTagRepetition = 0x52455053;  // stream tags for seed derivation
constexpr std::uint64_t kTagValidation = 0x56414c53;
}  // namespace

void SplitPlan::validate() const {
    if (n_folds < 2) throw DataError("split plan needs at least 2 folds");
    if (n_repetitions < 1) throw DataError("split plan needs at least 1 repetition");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw DataError("validation fraction must lie in (0,1)");
}

std::vector<FoldAssignment> make_folds(std::size_t n_samples, const SplitPlan& plan) {
    plan.validate();
    const std::size_t k = static_cast<std::size_t>(plan.n_folds);
    if (n_samples < k)
        throw DataError("infeasible plan: " + std::to_string(n_samples) + " samples for " +
                        std::to_string(k) + " folds");

    std::vector<FoldAssignment> out;
    out.reserve(k * static_cast<std::size_t>(plan.n_repetitions));

    const std::size_t base = n_samples / k;
    const std::size_t extra = n_samples % k;

    for (int rep = 0; rep < plan.n_repetitions; ++rep) {
        const std::uint64_t rep_seed =
            derive_seed(plan.seed, kTagRepetition, static_cast<std::uint64_t>(rep));
        std::vector<std::size_t> order(n_samples);
        std::iota(order.begin(), order.end(), 0);
        Rng rng(rep_seed);
        rng.shuffle(order);

        // fold boundaries over the shuffled order; first `extra` folds one longer
        std::vector<std::size_t> start(k + 1, 0);
        for (std::size_t f = 0; f < k; ++f)
            start[f + 1] = start[f] + base + (f < extra ? 1 : 0);

        for (std::size_t f = 0; f < k; ++f) {
            FoldAssignment fa;
            fa.repetition = rep;
            fa.fold = static_cast<int>(f);
            fa.test_idx.assign(order.begin() + start[f], order.begin() + start[f + 1]);

            std::vector<std::size_t> pool;
            pool.reserve(n_samples - fa.test_idx.size());
            pool.insert(pool.end(), order.begin(), order.begin() + start[f]);
            pool.insert(pool.end(), order.begin() + start[f + 1], order.end());

            Rng vrng(derive_seed(rep_seed, kTagValidation, f));
            vrng.shuffle(pool);
            const auto n_val = static_cast<std::size_t>(
                std::llround(static_cast<double>(pool.size()) * plan.validation_fraction));
            if (n_val == 0 || n_val >= pool.size())
                throw DataError("infeasible plan: validation fraction leaves an empty subset");
            fa.validation_idx.assign(pool.begin(), pool.begin() + n_val);
            fa.train_idx.assign(pool.begin() + n_val, pool.end());

            std::sort(fa.train_idx.begin(), fa.train_idx.end());
            std::sort(fa.validation_idx.begin(), fa.validation_idx.end());
            std::sort(fa.test_idx.begin(), fa.test_idx.end());
            out.push_back(std::move(fa));
        }
    }
    return out;
}

}  // namespace specal
