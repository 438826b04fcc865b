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

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfsound/analysis.hpp"
#include "cfsound/config.hpp"
#include "cfsound/dataset_io.hpp"
#include "cfsound/flight.hpp"

namespace cfsound {

// Error carrying the pipeline stage it originated from; the CLI surfaces the
// prefixed message verbatim.
class StageError : public std::runtime_error {
  public:
    StageError(std::string stage, const std::string& message)
        : std::runtime_error("error[" + stage + "]: " + message), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

  private:
    std::string stage_;
};

namespace detail {

template <typename F>
auto run_stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

// "alt35", "alt70", "alt12p5": altitude tag usable in file names.
inline std::string altitude_tag(double altitude_m) {
    std::string tag = "alt" + format_double(altitude_m);
    for (auto& c : tag)
        if (c == '.')
            c = 'p';
    return tag;
}

} // namespace detail

struct PipelineResult {
    std::vector<std::string> written_files;
};

// Runs the campaign described by `config` end to end: synthesizes the field,
// flies every plan, and emits the requested analysis CSVs (plus datasets if
// configured) under out_dir. Every output is a pure function of the config,
// including its master seed.
inline PipelineResult run_pipeline(const RunConfig& config, const std::string& out_dir) {
    detail::run_stage("config", [&] { config.validate(); });

    PipelineResult result;
    const std::filesystem::path out_path(out_dir);
    detail::run_stage("io", [&] { std::filesystem::create_directories(out_path); });

    const SyntheticField field = detail::run_stage(
        "generate", [&] { return SyntheticField(config.environment); });

    const UplinkPower power = config.uplink_power();
    for (const auto& plan : config.flights) {
        const std::string tag = detail::altitude_tag(plan.altitude_m);

        const SoundingDataset dataset = detail::run_stage("sound", [&] {
            SoundingOptions options;
            options.n_trials = config.n_trials;
            options.jitter_sigma_m = config.jitter_sigma_m;
            options.n_threads = config.n_threads;
            return simulate_sounding(field, plan, config.ues, options);
        });
        if (config.write_datasets) {
            const auto path = (out_path / ("dataset_" + tag + ".dat")).string();
            detail::run_stage("sound", [&] { write_dataset(dataset, path); });
            result.written_files.push_back(path);
        }

        std::optional<CampaignView> view; // built once, shared by the analyses
        const auto campaign_view = [&]() -> const CampaignView& {
            if (!view)
                view = make_campaign_view(dataset, 1);
            return *view;
        };

        for (const auto& analysis : config.analyses) {
            if (analysis == "gain-map") {
                detail::run_stage("gain-map", [&] {
                    for (const auto& ue : config.ues) {
                        const auto path =
                            (out_path /
                             ("gain_map_" + tag + "_ue" + std::to_string(ue.ue_id) + ".csv"))
                                .string();
                        auto out = detail::open_output(path);
                        write_gain_map_csv(dataset, ue.ue_id, 1, out);
                        result.written_files.push_back(path);
                    }
                });
            } else if (analysis == "snr-sweep") {
                detail::run_stage("snr-sweep", [&] {
                    SnrSweepConfig sweep;
                    sweep.ap_counts = config.snr_sweep.ap_counts;
                    sweep.n_subsets = config.snr_sweep.n_subsets;
                    sweep.power = power;
                    sweep.seed = config.environment.seed;
                    sweep.n_threads = config.n_threads;
                    const SnrSweepResult sweep_result = snr_sweep(campaign_view(), sweep);
                    const auto path = (out_path / ("snr_sweep_" + tag + ".csv")).string();
                    auto out = detail::open_output(path);
                    write_snr_sweep_csv(sweep_result, out);
                    result.written_files.push_back(path);
                });
            } else if (analysis == "sinr-eval") {
                detail::run_stage("sinr-eval", [&] {
                    SinrEvalConfig eval;
                    eval.ap_counts = config.sinr_eval.ap_counts;
                    eval.n_subsets = config.sinr_eval.n_subsets;
                    eval.aggregation = config.sinr_eval.aggregation;
                    eval.cdf_points = config.sinr_eval.cdf_points;
                    eval.power = power;
                    eval.seed = config.environment.seed;
                    eval.n_threads = config.n_threads;
                    const SinrEvalResult eval_result =
                        multi_user_sinr_eval(campaign_view(), eval);
                    const auto summary_path =
                        (out_path / ("sinr_eval_" + tag + ".csv")).string();
                    auto summary_out = detail::open_output(summary_path);
                    write_sinr_eval_csv(eval_result, summary_out);
                    result.written_files.push_back(summary_path);
                    const auto cdf_path = (out_path / ("sinr_cdf_" + tag + ".csv")).string();
                    auto cdf_out = detail::open_output(cdf_path);
                    write_sinr_cdf_csv(eval_result, cdf_out);
                    result.written_files.push_back(cdf_path);
                });
            } else if (analysis == "repro") {
                detail::run_stage("repro", [&] {
                    const double rms = reproducibility_rms_db(
                        dataset, config.repro.ue_id, config.repro.trial_a,
                        config.repro.trial_b);
                    const std::vector<std::pair<int, double>> rows = {
                        {config.repro.ue_id, rms}};
                    const auto path = (out_path / ("repro_" + tag + ".csv")).string();
                    auto out = detail::open_output(path);
                    write_repro_csv(rows, out);
                    result.written_files.push_back(path);
                });
            }
        }
    }
    return result;
}

} // namespace cfsound
