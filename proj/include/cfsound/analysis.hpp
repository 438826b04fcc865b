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

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfsound/channel_metrics.hpp"
#include "cfsound/combining.hpp"
#include "cfsound/parallel.hpp"
#include "cfsound/records.hpp"
#include "cfsound/rng.hpp"
#include "cfsound/stats.hpp"

namespace cfsound {

// Dense per-user channel matrices for one trial: channels[u](m, i) is the
// i-th frequency realization of the link between virtual-array position m
// and user u. All users share the same virtual array, so row counts match.
struct CampaignView {
    std::vector<int> ue_ids;
    int f_points = 0;
    std::size_t n_aps = 0;
    std::vector<Eigen::MatrixXcd> channels;
};

inline CampaignView make_campaign_view(const SoundingDataset& dataset, int trial) {
    CampaignView view;
    view.ue_ids = dataset.ue_ids();
    if (view.ue_ids.empty())
        throw std::invalid_argument("make_campaign_view: dataset has no records.");
    view.f_points = dataset.meta.f_points;
    for (int ue : view.ue_ids) {
        const auto records = dataset.records_for(ue, trial);
        if (records.empty())
            throw std::invalid_argument("make_campaign_view: no records for requested trial.");
        if (view.channels.empty())
            view.n_aps = records.size();
        else if (records.size() != view.n_aps)
            throw std::invalid_argument(
                "make_campaign_view: users disagree on virtual-array size.");
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(records.size()),
                           static_cast<Eigen::Index>(view.f_points));
        for (std::size_t r = 0; r < records.size(); ++r) {
            if (records[r].samples.size() != static_cast<std::size_t>(view.f_points))
                throw std::invalid_argument("make_campaign_view: record length != F.");
            for (int i = 0; i < view.f_points; ++i)
                m(static_cast<Eigen::Index>(r), i) = records[r].samples[static_cast<std::size_t>(i)];
        }
        view.channels.push_back(std::move(m));
    }
    return view;
}

// Trajectory gain profiles for every (ue, trial) pair in the dataset.
inline std::vector<GainProfile> gain_map(const SoundingDataset& dataset) {
    std::vector<GainProfile> profiles;
    for (int ue : dataset.ue_ids())
        for (int trial : dataset.trials_for(ue))
            profiles.push_back(gain_profile(dataset, ue, trial));
    return profiles;
}

// RMS difference between the gain profiles of two flights over the same
// trajectory; the reproducibility figure of merit.
inline double reproducibility_rms_db(const SoundingDataset& dataset, int ue, int trial_a,
                                     int trial_b) {
    return rms_gain_error(gain_profile(dataset, ue, trial_a),
                          gain_profile(dataset, ue, trial_b));
}

// ---- Monte-Carlo MR-combined SNR versus number of serving APs ------------

struct SnrSweepConfig {
    std::vector<int> ap_counts = {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    int n_subsets = 10000;
    UplinkPower power;
    std::uint64_t seed = 1;
    int n_threads = 1;
};

struct SnrSweepResult {
    std::vector<int> ap_counts;
    std::vector<int> ue_ids;
    std::vector<std::vector<SummaryStats>> snr_db; // [ue][count]
};

// For each subset size, draws n_subsets uniform AP subsets and evaluates the
// MR-combined uplink SNR of every user over each subset. Subsets are shared
// across users (one deployment serves everyone) and keyed by
// (seed, count, repetition), so results do not depend on the thread count.
inline SnrSweepResult snr_sweep(const CampaignView& view, const SnrSweepConfig& config) {
    config.power.validate();
    if (config.ap_counts.empty())
        throw std::invalid_argument("snr_sweep: need at least one subset size.");
    for (int count : config.ap_counts)
        if (count < 1 || static_cast<std::size_t>(count) > view.n_aps)
            throw std::invalid_argument("snr_sweep: subset size out of range.");
    if (config.n_subsets < 1)
        throw std::invalid_argument("snr_sweep: need at least one subset.");

    const std::size_t n_ue = view.ue_ids.size();
    const std::size_t n_counts = config.ap_counts.size();
    const auto n_reps = static_cast<std::size_t>(config.n_subsets);

    // Eq.-style frequency-averaged channel energy per virtual AP and user.
    std::vector<Eigen::VectorXd> mean_energy(n_ue);
    for (std::size_t u = 0; u < n_ue; ++u)
        mean_energy[u] = view.channels[u].rowwise().squaredNorm() /
                         static_cast<double>(view.f_points);

    std::vector<std::vector<std::vector<double>>> samples(
        n_ue, std::vector<std::vector<double>>(n_counts, std::vector<double>(n_reps)));

    parallel_for(n_counts * n_reps, config.n_threads, [&](std::size_t slot) {
        const std::size_t c = slot / n_reps;
        const std::size_t rep = slot % n_reps;
        const auto count = static_cast<std::size_t>(config.ap_counts[c]);
        Rng rng(seed_from(config.seed, RandomStream::kSnrSubset,
                          static_cast<std::uint64_t>(count), rep));
        const std::vector<int> subset = sample_subset(rng, view.n_aps, count);
        for (std::size_t u = 0; u < n_ue; ++u) {
            double sum = 0.0;
            for (int m : subset)
                sum += mean_energy[u][m];
            samples[u][c][rep] =
                db_from_linear(config.power.p_tx / config.power.noise * sum);
        }
    });

    SnrSweepResult result;
    result.ap_counts = config.ap_counts;
    result.ue_ids = view.ue_ids;
    result.snr_db.resize(n_ue);
    for (std::size_t u = 0; u < n_ue; ++u)
        for (std::size_t c = 0; c < n_counts; ++c)
            result.snr_db[u].push_back(summarize(samples[u][c]));
    return result;
}

// ---- Monte-Carlo multi-user SINR under optimum and MR combining ----------

enum class CombiningMethod { kOptimum, kMaxRatio };

inline const char* combining_method_name(CombiningMethod method) {
    return method == CombiningMethod::kOptimum ? "optimum" : "mr";
}

// How per-frequency SINR values become the pooled per-(user, subset size)
// sample set: every realization individually, or one mean value per subset.
enum class FrequencyAggregation { kPerRealization, kRecordMean };

struct SinrEvalConfig {
    std::vector<int> ap_counts = {64, 256};
    int n_subsets = 200;
    UplinkPower power;
    FrequencyAggregation aggregation = FrequencyAggregation::kPerRealization;
    std::uint64_t seed = 1;
    int n_threads = 1;
    int cdf_points = 101;
};

struct SinrEvalResult {
    std::vector<int> ap_counts;
    std::vector<int> ue_ids;
    static constexpr std::array<CombiningMethod, 2> kMethods = {CombiningMethod::kOptimum,
                                                                CombiningMethod::kMaxRatio};
    // Indexed [method][ue][count]; samples are SINR in dB.
    std::vector<std::vector<std::vector<std::vector<double>>>> samples_db;
    std::vector<std::vector<std::vector<SummaryStats>>> summary_db;
    std::vector<std::vector<std::vector<CdfCurve>>> cdf_db;
    // Smallest (optimum - MR) SINR gap seen across every user, subset and
    // frequency realization, in linear scale and relative to the MR value.
    double min_margin = std::numeric_limits<double>::infinity();
    double min_relative_margin = std::numeric_limits<double>::infinity();
};

// Evaluates the per-user uplink SINR under optimum and maximum-ratio
// combining over random AP subsets, per frequency realization. Both methods
// see identical subsets; the subset draw is keyed by (seed, count,
// repetition) only. Samples land in preallocated slots, keeping the result
// independent of the thread count.
inline SinrEvalResult multi_user_sinr_eval(const CampaignView& view,
                                           const SinrEvalConfig& config) {
    config.power.validate();
    if (config.ap_counts.empty())
        throw std::invalid_argument("multi_user_sinr_eval: need at least one subset size.");
    for (int count : config.ap_counts)
        if (count < 1 || static_cast<std::size_t>(count) > view.n_aps)
            throw std::invalid_argument("multi_user_sinr_eval: subset size out of range.");
    if (config.n_subsets < 1)
        throw std::invalid_argument("multi_user_sinr_eval: need at least one subset.");

    const std::size_t n_ue = view.ue_ids.size();
    const std::size_t n_counts = config.ap_counts.size();
    const auto n_reps = static_cast<std::size_t>(config.n_subsets);
    const auto n_freq = static_cast<std::size_t>(view.f_points);

    // Raw linear SINR, indexed [method][ue][count][rep * F + f].
    std::vector<std::vector<std::vector<std::vector<double>>>> raw(
        2, std::vector<std::vector<std::vector<double>>>(
               n_ue, std::vector<std::vector<double>>(
                         n_counts, std::vector<double>(n_reps * n_freq))));
    std::vector<double> slot_min_margin(n_counts * n_reps,
                                        std::numeric_limits<double>::infinity());
    std::vector<double> slot_min_rel(n_counts * n_reps,
                                     std::numeric_limits<double>::infinity());

    parallel_for(n_counts * n_reps, config.n_threads, [&](std::size_t slot) {
        const std::size_t c = slot / n_reps;
        const std::size_t rep = slot % n_reps;
        const auto count = static_cast<std::size_t>(config.ap_counts[c]);
        Rng rng(seed_from(config.seed, RandomStream::kSinrSubset,
                          static_cast<std::uint64_t>(count), rep));
        const std::vector<int> subset = sample_subset(rng, view.n_aps, count);

        std::vector<Eigen::VectorXcd> h(n_ue,
                                        Eigen::VectorXcd(static_cast<Eigen::Index>(count)));
        const auto dim = static_cast<Eigen::Index>(count);
        for (std::size_t f = 0; f < n_freq; ++f) {
            for (std::size_t u = 0; u < n_ue; ++u)
                for (std::size_t m = 0; m < count; ++m)
                    h[u][static_cast<Eigen::Index>(m)] =
                        view.channels[u](subset[m], static_cast<Eigen::Index>(f));
            // One Cholesky of the full covariance A = sigma^2 I + p sum_i h_i h_i^H
            // serves every user: B_k^{-1} h_k is collinear with A^{-1} h_k, and the
            // combiner scale cancels in the SINR quotient.
            Eigen::MatrixXcd a =
                config.power.noise * Eigen::MatrixXcd::Identity(dim, dim);
            for (std::size_t u = 0; u < n_ue; ++u)
                a.noalias() += config.power.p_tx * h[u] * h[u].adjoint();
            Eigen::LLT<Eigen::MatrixXcd> llt(a);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error(
                    "multi_user_sinr_eval: covariance factorization failed.");
            for (std::size_t k = 0; k < n_ue; ++k) {
                const Eigen::VectorXcd v_opt = llt.solve(h[k]);
                const double sinr_opt = sinr_for_combiner(v_opt, h, k, config.power);
                const double sinr_mr = sinr_for_combiner(h[k], h, k, config.power);
                raw[0][k][c][rep * n_freq + f] = sinr_opt;
                raw[1][k][c][rep * n_freq + f] = sinr_mr;
                const double margin = sinr_opt - sinr_mr;
                slot_min_margin[slot] = std::min(slot_min_margin[slot], margin);
                slot_min_rel[slot] =
                    std::min(slot_min_rel[slot], margin / std::max(sinr_mr, 1e-300));
            }
        }
    });

    SinrEvalResult result;
    result.ap_counts = config.ap_counts;
    result.ue_ids = view.ue_ids;
    for (double m : slot_min_margin)
        result.min_margin = std::min(result.min_margin, m);
    for (double m : slot_min_rel)
        result.min_relative_margin = std::min(result.min_relative_margin, m);

    result.samples_db.assign(
        2, std::vector<std::vector<std::vector<double>>>(
               n_ue, std::vector<std::vector<double>>(n_counts)));
    result.summary_db.assign(2, std::vector<std::vector<SummaryStats>>(n_ue));
    result.cdf_db.assign(2, std::vector<std::vector<CdfCurve>>(n_ue));
    for (std::size_t method = 0; method < 2; ++method) {
        for (std::size_t u = 0; u < n_ue; ++u) {
            for (std::size_t c = 0; c < n_counts; ++c) {
                std::vector<double>& out = result.samples_db[method][u][c];
                const std::vector<double>& lin = raw[method][u][c];
                if (config.aggregation == FrequencyAggregation::kPerRealization) {
                    out.reserve(lin.size());
                    for (double s : lin)
                        out.push_back(db_from_linear(s));
                } else {
                    out.reserve(n_reps);
                    for (std::size_t rep = 0; rep < n_reps; ++rep) {
                        double sum = 0.0;
                        for (std::size_t f = 0; f < n_freq; ++f)
                            sum += lin[rep * n_freq + f];
                        out.push_back(db_from_linear(sum / static_cast<double>(n_freq)));
                    }
                }
                result.summary_db[method][u].push_back(summarize(out));
                result.cdf_db[method][u].push_back(empirical_cdf(out, config.cdf_points));
            }
        }
    }
    return result;
}

} // namespace cfsound
