#pragma once

// Quality indicator and the statistical comparison used by the experiment
// tables: inverted generational distance and a two-sided Wilcoxon rank-sum
// mark.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace moeacsod {

/// Mean distance from each reference point to its nearest approximation
/// point; lower is better.
inline double igd(const std::vector<std::vector<double>>& approximation,
                  const std::vector<std::vector<double>>& reference) {
    if (approximation.empty() || reference.empty()) {
        throw std::invalid_argument("igd: both point sets must be non-empty");
    }
    double total = 0.0;
    for (const auto& r : reference) {
        double best = -1.0;
        for (const auto& a : approximation) {
            double sq = 0.0;
            for (std::size_t k = 0; k < r.size(); ++k) {
                const double d = r[k] - a[k];
                sq += d * d;
            }
            if (best < 0.0 || sq < best) best = sq;
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference.size());
}

inline double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

/// Sum of the (tie-averaged) ranks of the second sample in the pooled
/// ordering; the Wilcoxon rank-sum statistic.
inline double rank_sum_statistic(const std::vector<double>& sample_a,
                                 const std::vector<double>& sample_b) {
    struct Tagged {
        double value;
        bool from_b;
    };
    std::vector<Tagged> pooled;
    pooled.reserve(sample_a.size() + sample_b.size());
    for (double v : sample_a) pooled.push_back({v, false});
    for (double v : sample_b) pooled.push_back({v, true});
    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const Tagged& x, const Tagged& y) { return x.value < y.value; });
    double w = 0.0;
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].from_b) w += avg_rank;
        }
        i = j;
    }
    return w;
}

/// '+': comparator significantly better (lower IGD) than the baseline,
/// '-': significantly worse, '~': statistically similar. Two-sided
/// Wilcoxon rank-sum with tie correction and continuity correction.
enum class SignificanceMark { Better, Worse, Similar };

inline std::string mark_to_string(SignificanceMark mark) {
    switch (mark) {
        case SignificanceMark::Better: return "+";
        case SignificanceMark::Worse: return "-";
        case SignificanceMark::Similar: return "~";
    }
    return "~";
}

inline SignificanceMark significance(const std::vector<double>& baseline,
                                     const std::vector<double>& comparator, double alpha_level) {
    if (baseline.size() < 3 || comparator.size() < 3) {
        throw std::invalid_argument("significance: need at least 3 samples per side");
    }
    const double na = static_cast<double>(baseline.size());
    const double nb = static_cast<double>(comparator.size());
    const double n = na + nb;
    const double w = rank_sum_statistic(baseline, comparator);
    const double mean_w = nb * (n + 1.0) / 2.0;

    // Tie correction over the pooled sample.
    std::vector<double> pooled;
    pooled.reserve(static_cast<std::size_t>(n));
    pooled.insert(pooled.end(), baseline.begin(), baseline.end());
    pooled.insert(pooled.end(), comparator.begin(), comparator.end());
    std::sort(pooled.begin(), pooled.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < pooled.size();) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double var_w = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (var_w <= 0.0) return SignificanceMark::Similar;

    const double z = (std::fabs(w - mean_w) - 0.5) / std::sqrt(var_w);
    const double p = std::erfc(std::max(z, 0.0) / std::sqrt(2.0));  // two-sided
    if (p >= alpha_level) return SignificanceMark::Similar;
    return w < mean_w ? SignificanceMark::Better : SignificanceMark::Worse;
}

}  // namespace moeacsod
