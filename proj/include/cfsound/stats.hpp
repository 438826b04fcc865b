// SPDX-License-Identifier: Apache-2.0
//
// cfsound - drone virtual-array channel sounding and cell-free massive MIMO analysis
// Copyright (C) 2026 cfsound contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "cfsound/rng.hpp"

namespace cfsound {

inline constexpr std::array<double, 9> kReportPercentiles = {1.0,  5.0,  10.0, 25.0, 50.0,
                                                             75.0, 90.0, 95.0, 99.0};

inline double mean(std::span<const double> values) {
    if (values.empty())
        throw std::invalid_argument("mean: empty sample.");
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

inline double population_std(std::span<const double> values) {
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values)
        ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size()));
}

// Percentile by linear interpolation between order statistics at fractional
// rank q/100 * (n-1).
inline double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty())
        throw std::invalid_argument("percentile: empty sample.");
    if (q < 0.0 || q > 100.0)
        throw std::invalid_argument("percentile: q must be in [0, 100].");
    const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    const double frac = rank - static_cast<double>(lo);
    if (frac == 0.0) // exact order statistic; also keeps +-inf samples NaN-free
        return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double percentile(std::span<const double> values, double q) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return percentile_sorted(sorted, q);
}

struct SummaryStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<double> percentile_q;
    std::vector<double> percentile_value;
};

// Looks up one of the report percentiles stored in a summary.
inline double summary_percentile(const SummaryStats& s, double q) {
    for (std::size_t i = 0; i < s.percentile_q.size(); ++i)
        if (s.percentile_q[i] == q)
            return s.percentile_value[i];
    throw std::invalid_argument("summary_percentile: percentile not recorded.");
}

inline SummaryStats summarize(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    SummaryStats s;
    s.count = sorted.size();
    s.mean = mean(sorted);
    s.std_dev = population_std(sorted);
    s.min = sorted.front();
    s.max = sorted.back();
    for (double q : kReportPercentiles) {
        s.percentile_q.push_back(q);
        s.percentile_value.push_back(percentile_sorted(sorted, q));
    }
    return s;
}

// Empirical CDF evaluated on a uniform grid between the sample extremes.
struct CdfCurve {
    std::vector<double> value;
    std::vector<double> probability; // P(X <= value)
};

inline CdfCurve empirical_cdf(std::span<const double> values, int n_points = 101) {
    if (values.empty())
        throw std::invalid_argument("empirical_cdf: empty sample.");
    if (n_points < 2)
        throw std::invalid_argument("empirical_cdf: need at least two grid points.");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    CdfCurve curve;
    curve.value.reserve(static_cast<std::size_t>(n_points));
    curve.probability.reserve(static_cast<std::size_t>(n_points));
    const double lo = sorted.front();
    const double hi = sorted.back();
    for (int i = 0; i < n_points; ++i) {
        const double x =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        curve.value.push_back(x);
        curve.probability.push_back(static_cast<double>(it - sorted.begin()) /
                                    static_cast<double>(sorted.size()));
    }
    return curve;
}

// Uniform random subset of `count` distinct indices out of [0, n_total),
// returned sorted. Partial Fisher-Yates over an index table.
inline std::vector<int> sample_subset(Rng& rng, std::size_t n_total, std::size_t count) {
    if (count == 0 || count > n_total)
        throw std::invalid_argument("sample_subset: count must be in [1, n_total].");
    std::vector<int> indices(n_total);
    std::iota(indices.begin(), indices.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n_total - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(count);
    std::sort(indices.begin(), indices.end());
    return indices;
}

} // namespace cfsound
