#pragma once

#include <pspso/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace pspso::stats {

struct SampleSummary {
    double mean = 0.0;
    double std_error = 0.0; // sample std (n - 1) / sqrt(n); 0 for a single value
    std::size_t n = 0;
};

inline SampleSummary summarize(std::span<const double> values) {
    if (values.empty()) throw ContractViolation("cannot summarize an empty sample");
    const auto n = values.size();
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    if (n == 1) return {mean, 0.0, 1};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return {mean, sd / std::sqrt(static_cast<double>(n)), n};
}

struct MannWhitneyResult {
    double u = 0.0;           // U statistic of the first sample
    double p_two_sided = 1.0;
};

/// Average ranks (1-based) of the pooled values; also returns sum over tie groups of t^3 - t.
inline std::vector<double> average_ranks(std::span<const double> pooled, double& tie_term) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });

    std::vector<double> ranks(n);
    tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && pooled[order[j]] == pooled[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    return ranks;
}

/// Two-sided Mann-Whitney U test, normal approximation with tie-corrected
/// variance and a 0.5 continuity correction. p is 1 when the variance vanishes.
inline MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ContractViolation("Mann-Whitney U needs two non-empty samples");
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());

    double tie_term = 0.0;
    const auto ranks = average_ranks(pooled, tie_term);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);

    MannWhitneyResult r;
    r.u = rank_sum_a - na * (na + 1.0) / 2.0;

    const double n = na + nb;
    const double mu = na * nb / 2.0;
    const double var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (!(var > 0.0)) {
        r.p_two_sided = 1.0;
        return r;
    }
    const double z = std::max(std::abs(r.u - mu) - 0.5, 0.0) / std::sqrt(var);
    r.p_two_sided = std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
    return r;
}

} // namespace pspso::stats
