#include "specal/tukey.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "specal/errors.hpp"
#include "specal/matrix.hpp"
#include "specal/specfun.hpp"

namespace specal {

bool TukeyResult::share_letter(std::size_t i, std::size_t j) const {
    for (char c : letters[i])
        if (letters[j].find(c) != std::string::npos) return true;
    return false;
}

namespace {

/// Insert-absorb construction: start from one column holding every group;
/// split any column containing a significantly different pair; drop columns
/// that became subsets. Guarantees the letter-display invariant by
/// construction.
std::vector<std::set<std::size_t>> build_columns(std::size_t n_groups,
                                                 const std::vector<TukeyPair>& pairs) {
    std::vector<std::set<std::size_t>> cols;
    std::set<std::size_t> all;
    for (std::size_t g = 0; g < n_groups; ++g) all.insert(g);
    cols.push_back(all);

    for (const auto& pr : pairs) {
        if (!pr.significant) continue;
        std::vector<std::set<std::size_t>> next;
        for (auto& col : cols) {
            if (col.count(pr.i) && col.count(pr.j)) {
                std::set<std::size_t> a = col, b = col;
                a.erase(pr.j);
                b.erase(pr.i);
                next.push_back(std::move(a));
                next.push_back(std::move(b));
            } else {
                next.push_back(std::move(col));
            }
        }
        // absorb: remove columns contained in another
        std::vector<std::set<std::size_t>> kept;
        for (std::size_t a = 0; a < next.size(); ++a) {
            bool absorbed = false;
            for (std::size_t b = 0; b < next.size() && !absorbed; ++b) {
                if (a == b || next[a].size() > next[b].size()) continue;
                if (next[a] == next[b] && a > b) absorbed = true;
                else if (next[a].size() < next[b].size() &&
                         std::includes(next[b].begin(), next[b].end(), next[a].begin(),
                                       next[a].end()))
                    absorbed = true;
            }
            if (!absorbed) kept.push_back(std::move(next[a]));
        }
        cols = std::move(kept);
    }
    return cols;
}

}  // namespace

TukeyResult tukey_hsd(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                      double alpha) {
    if (groups.size() < 2) throw DataError("tukey_hsd needs at least 2 groups");
    for (const auto& [label, values] : groups)
        if (values.size() < 2)
            throw DataError("tukey_hsd: group '" + label + "' has fewer than 2 observations");

    TukeyResult res;
    res.alpha = alpha;

    double ss_within = 0.0;
    std::size_t n_total = 0;
    for (const auto& [label, values] : groups) {
        TukeyGroup g;
        g.label = label;
        g.n = values.size();
        g.mean = vec_mean(values);
        g.stddev = vec_std(values);
        for (double v : values) ss_within += (v - g.mean) * (v - g.mean);
        n_total += g.n;
        res.groups.push_back(g);
    }
    const std::size_t k = groups.size();
    res.error_df = static_cast<double>(n_total - k);
    if (res.error_df < 1.0) throw DataError("tukey_hsd: no error degrees of freedom");
    res.mse_within = ss_within / res.error_df;
    if (!(res.mse_within > 0.0))
        throw DataError("tukey_hsd: zero within-group variance in every group");

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            TukeyPair pr;
            pr.i = i;
            pr.j = j;
            const double se = std::sqrt(res.mse_within / 2.0 *
                                        (1.0 / static_cast<double>(res.groups[i].n) +
                                         1.0 / static_cast<double>(res.groups[j].n)));
            pr.q = std::abs(res.groups[i].mean - res.groups[j].mean) / se;
            pr.p_value =
                1.0 - studentized_range_cdf(pr.q, static_cast<int>(k), res.error_df);
            pr.significant = pr.p_value < alpha;
            res.pairs.push_back(pr);
        }
    }

    auto cols = build_columns(k, res.pairs);
    // letters ordered by the best (largest) member mean of each column
    std::vector<std::size_t> col_order(cols.size());
    std::iota(col_order.begin(), col_order.end(), 0);
    auto col_best = [&](std::size_t c) {
        double best = -1e300;
        for (std::size_t g : cols[c]) best = std::max(best, res.groups[g].mean);
        return best;
    };
    std::stable_sort(col_order.begin(), col_order.end(),
                     [&](std::size_t a, std::size_t b) { return col_best(a) > col_best(b); });

    res.letters.assign(k, "");
    for (std::size_t rank = 0; rank < col_order.size(); ++rank) {
        const char letter = static_cast<char>('a' + (rank % 26));
        for (std::size_t g : cols[col_order[rank]]) res.letters[g].push_back(letter);
    }
    for (auto& s : res.letters) std::sort(s.begin(), s.end());
    return res;
}

}  // namespace specal
