#pragma once

#include <string>
#include <vector>

namespace specal {

/// One group in a Tukey HSD comparison.
struct TukeyGroup {
    std::string label;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t n = 0;
};

struct TukeyPair {
    std::size_t i = 0, j = 0;
    double q = 0.0;
    double p_value = 1.0;
    bool significant = false;
};

/// All-pairs comparison result with a compact letter display: groups
/// sharing a letter are not significantly different at alpha; groups
/// sharing none are.
struct TukeyResult {
    double alpha = 0.05;
    double mse_within = 0.0;
    double error_df = 0.0;
    std::vector<TukeyGroup> groups;
    std::vector<TukeyPair> pairs;
    std::vector<std::string> letters;  // per group, e.g. "a", "ab"

    bool share_letter(std::size_t i, std::size_t j) const;
};

/// One-way-ANOVA within-MSE, Tukey-Kramer q statistics, p-values from the
/// studentized range distribution and an insert-absorb letter display.
TukeyResult tukey_hsd(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                      double alpha);

}  // namespace specal
