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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <cfsound/rng.hpp>
#include <cfsound/stats.hpp>

using namespace cfsound;

TEST_CASE("mean and population std on hand values", "[stats]") {
    const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
    CHECK(mean(v) == Catch::Approx(2.5).margin(1e-15));
    CHECK(population_std(v) == Catch::Approx(std::sqrt(1.25)).margin(1e-12));
    CHECK_THROWS_AS(mean(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("median of {0,10} dB interpolates to 5 dB", "[stats]") {
    const std::vector<double> v = {0.0, 10.0};
    CHECK(percentile(v, 50.0) == Catch::Approx(5.0).margin(1e-15));
}

TEST_CASE("constant samples give equal percentiles and zero std", "[stats]") {
    const std::vector<double> v(37, 4.25);
    const SummaryStats s = summarize(v);
    CHECK(s.std_dev == 0.0);
    CHECK(s.min == 4.25);
    CHECK(s.max == 4.25);
    for (double p : s.percentile_value)
        CHECK(p == 4.25);
}

TEST_CASE("percentile endpoints and argument checks", "[stats]") {
    const std::vector<double> v = {3.0, 1.0, 2.0};
    CHECK(percentile(v, 0.0) == 1.0);
    CHECK(percentile(v, 100.0) == 3.0);
    CHECK(percentile(v, 50.0) == 2.0);
    CHECK_THROWS_AS(percentile(v, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(percentile(v, 100.5), std::invalid_argument);
    CHECK_THROWS_AS(percentile(std::vector<double>{}, 50.0), std::invalid_argument);
}

TEST_CASE("std of 1e5 standard normal samples is within 2%", "[stats]") {
    Rng rng(2024);
    std::vector<double> samples(100000);
    for (auto& s : samples)
        s = rng.normal();
    CHECK(std::abs(population_std(samples) - 1.0) < 0.02);
}

TEST_CASE("summarize agrees with direct percentile evaluation", "[stats]") {
    Rng rng(5);
    std::vector<double> samples(1001);
    for (auto& s : samples)
        s = rng.uniform(-10.0, 30.0);
    const SummaryStats s = summarize(samples);
    CHECK(s.count == samples.size());
    for (std::size_t i = 0; i < kReportPercentiles.size(); ++i)
        CHECK(s.percentile_value[i] ==
              Catch::Approx(percentile(samples, kReportPercentiles[i])).margin(1e-12));
    CHECK(summary_percentile(s, 50.0) == percentile(samples, 50.0));
    CHECK_THROWS_AS(summary_percentile(s, 33.0), std::invalid_argument);
}

TEST_CASE("empirical cdf spans the sample range monotonically", "[stats]") {
    const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
    const CdfCurve cdf = empirical_cdf(v, 7);
    REQUIRE(cdf.value.size() == 7);
    CHECK(cdf.value.front() == 1.0);
    CHECK(cdf.value.back() == 4.0);
    CHECK(cdf.probability.back() == 1.0);
    for (std::size_t i = 1; i < cdf.probability.size(); ++i)
        CHECK(cdf.probability[i] >= cdf.probability[i - 1]);
    const CdfCurve fine = empirical_cdf(v, 101);
    // P(X <= 2.5) = 0.5 for the four-point sample
    const auto it = std::lower_bound(fine.value.begin(), fine.value.end(), 2.5);
    CHECK(fine.probability[static_cast<std::size_t>(it - fine.value.begin())] ==
          Catch::Approx(0.5).margin(1e-12));
    CHECK_THROWS_AS(empirical_cdf(std::vector<double>{}, 11), std::invalid_argument);
    CHECK_THROWS_AS(empirical_cdf(v, 1), std::invalid_argument);
}

TEST_CASE("subset sampling yields sorted distinct uniform subsets", "[stats]") {
    Rng rng(77);
    const std::size_t n_total = 50;
    const std::size_t count = 12;
    std::vector<int> inclusion(n_total, 0);
    const int reps = 20000;
    for (int r = 0; r < reps; ++r) {
        const auto subset = sample_subset(rng, n_total, count);
        REQUIRE(subset.size() == count);
        REQUIRE(std::is_sorted(subset.begin(), subset.end()));
        const std::set<int> unique(subset.begin(), subset.end());
        REQUIRE(unique.size() == count);
        for (int idx : subset) {
            REQUIRE(idx >= 0);
            REQUIRE(idx < static_cast<int>(n_total));
            ++inclusion[static_cast<std::size_t>(idx)];
        }
    }
    const double expected = static_cast<double>(reps) * count / n_total; // 4800
    for (int c : inclusion)
        CHECK(std::abs(c - expected) < 0.08 * expected);

    Rng a(9);
    Rng b(9);
    CHECK(sample_subset(a, 100, 10) == sample_subset(b, 100, 10));
    CHECK_THROWS_AS(sample_subset(rng, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_subset(rng, 10, 11), std::invalid_argument);

    const auto all = sample_subset(rng, 8, 8);
    for (int i = 0; i < 8; ++i)
        CHECK(all[static_cast<std::size_t>(i)] == i);
}
