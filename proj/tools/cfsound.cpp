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
//
// Command-line front end: chains field generation, sounding simulation and
// the campaign analyses, and converts between dataset representations.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <cfsound/cfsound.hpp>

namespace {

template <typename F>
auto run_stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const cfsound::StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw cfsound::StageError(name, e.what());
    }
}

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int threads = 0;
    bool has_threads = false;
    CLI::App* sub = nullptr;

    void attach(CLI::App* app, bool with_threads = true) {
        sub = app;
        has_threads = with_threads;
        app->add_option("--config", config_path, "Run configuration file (JSON)")
            ->check(CLI::ExistingFile);
        app->add_option("--out-dir", out_dir, "Directory for output files");
        app->add_option("--seed", seed, "Master seed (overrides the config)");
        if (with_threads)
            app->add_option("--threads", threads,
                            "Worker threads for heavy loops (0 = one per core)");
    }

    cfsound::RunConfig load() const {
        return run_stage("config", [&] {
            cfsound::RunConfig config = config_path.empty()
                                            ? cfsound::default_run_config()
                                            : cfsound::load_run_config_file(config_path);
            if (sub->count("--seed"))
                config.environment.seed = seed;
            if (has_threads && sub->count("--threads"))
                config.n_threads = threads;
            config.validate();
            return config;
        });
    }

    std::filesystem::path prepare_out_dir() const {
        return run_stage("io", [&] {
            std::filesystem::create_directories(out_dir);
            return std::filesystem::path(out_dir);
        });
    }
};

void check_format_version(int version) {
    if (version != cfsound::kDatasetFormatVersion)
        throw cfsound::StageError(
            "io", "unsupported format_version " + std::to_string(version) + " (expected " +
                      std::to_string(cfsound::kDatasetFormatVersion) + ").");
}

void emit(const std::string& path) { std::cout << path << '\n'; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"drone virtual-array channel sounding simulator and cell-free massive "
                 "MIMO analysis toolkit"};
    app.require_subcommand(1);

    // --- run: full pipeline -------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "Run the configured campaign end to end");
    CommonOptions run_opts;
    run_opts.attach(run_cmd);
    run_cmd->callback([&] {
        const cfsound::RunConfig config = run_opts.load();
        const cfsound::PipelineResult result = cfsound::run_pipeline(config, run_opts.out_dir);
        for (const auto& path : result.written_files)
            emit(path);
    });

    // --- generate: resolve and persist the configuration --------------------
    auto* generate_cmd =
        app.add_subcommand("generate", "Resolve the environment config and write it out");
    CommonOptions generate_opts;
    generate_opts.attach(generate_cmd, false);
    generate_cmd->callback([&] {
        const cfsound::RunConfig config = generate_opts.load();
        run_stage("generate",
                  [&] { (void)cfsound::SyntheticField(config.environment); });
        const auto out_path = generate_opts.prepare_out_dir();
        const auto path = (out_path / "resolved_config.json").string();
        run_stage("io", [&] {
            auto out = cfsound::detail::open_output(path);
            out << cfsound::save_run_config(config).dump(2) << '\n';
        });
        emit(path);
    });

    // --- sound: simulate the campaign and write datasets ---------------------
    auto* sound_cmd =
        app.add_subcommand("sound", "Simulate the sounding flights and write datasets");
    CommonOptions sound_opts;
    sound_opts.attach(sound_cmd);
    int sound_format_version = cfsound::kDatasetFormatVersion;
    sound_cmd->add_option("--format-version", sound_format_version,
                          "Dataset format version to write");
    sound_cmd->callback([&] {
        check_format_version(sound_format_version);
        const cfsound::RunConfig config = sound_opts.load();
        const auto out_path = sound_opts.prepare_out_dir();
        const cfsound::SyntheticField field = run_stage(
            "generate", [&] { return cfsound::SyntheticField(config.environment); });
        for (const auto& plan : config.flights) {
            const cfsound::SoundingDataset dataset = run_stage("sound", [&] {
                cfsound::SoundingOptions options;
                options.n_trials = config.n_trials;
                options.jitter_sigma_m = config.jitter_sigma_m;
                options.n_threads = config.n_threads;
                return cfsound::simulate_sounding(field, plan, config.ues, options);
            });
            const auto path =
                (out_path / ("dataset_" + cfsound::detail::altitude_tag(plan.altitude_m) +
                             ".dat"))
                    .string();
            run_stage("io", [&] { cfsound::write_dataset(dataset, path); });
            emit(path);
        }
    });

    // --- gain-map: per-UE trajectory gain CSVs from a dataset ----------------
    auto* gain_cmd =
        app.add_subcommand("gain-map", "Write per-UE trajectory gain CSVs from a dataset");
    std::string gain_input;
    int gain_trial = 1;
    CommonOptions gain_opts;
    gain_cmd->add_option("--input", gain_input, "Dataset file")
        ->required()
        ->check(CLI::ExistingFile);
    gain_cmd->add_option("--trial", gain_trial, "Trial (flight) to evaluate");
    gain_opts.attach(gain_cmd, false);
    gain_cmd->callback([&] {
        const cfsound::SoundingDataset dataset =
            run_stage("read", [&] { return cfsound::read_dataset(gain_input); });
        const auto out_path = gain_opts.prepare_out_dir();
        run_stage("gain-map", [&] {
            for (int ue : dataset.ue_ids()) {
                const auto path =
                    (out_path / ("gain_map_ue" + std::to_string(ue) + ".csv")).string();
                auto out = cfsound::detail::open_output(path);
                cfsound::write_gain_map_csv(dataset, ue, gain_trial, out);
                emit(path);
            }
        });
    });

    // --- snr-sweep: MR-combined SNR vs AP count -------------------------------
    auto* snr_cmd =
        app.add_subcommand("snr-sweep", "MR-combined SNR versus AP subset size");
    std::string snr_input;
    int snr_trial = 1;
    CommonOptions snr_opts;
    snr_cmd->add_option("--input", snr_input, "Dataset file")
        ->required()
        ->check(CLI::ExistingFile);
    snr_cmd->add_option("--trial", snr_trial, "Trial (flight) to evaluate");
    snr_opts.attach(snr_cmd);
    snr_cmd->callback([&] {
        const cfsound::RunConfig config = snr_opts.load();
        const cfsound::SoundingDataset dataset =
            run_stage("read", [&] { return cfsound::read_dataset(snr_input); });
        const auto out_path = snr_opts.prepare_out_dir();
        run_stage("snr-sweep", [&] {
            const cfsound::CampaignView view = cfsound::make_campaign_view(dataset, snr_trial);
            cfsound::SnrSweepConfig sweep;
            sweep.ap_counts = config.snr_sweep.ap_counts;
            sweep.n_subsets = config.snr_sweep.n_subsets;
            sweep.power = config.uplink_power();
            sweep.seed = config.environment.seed;
            sweep.n_threads = config.n_threads;
            const cfsound::SnrSweepResult result = cfsound::snr_sweep(view, sweep);
            const auto path = (out_path / "snr_sweep.csv").string();
            auto out = cfsound::detail::open_output(path);
            cfsound::write_snr_sweep_csv(result, out);
            emit(path);
        });
    });

    // --- sinr-eval: multi-user SINR, optimum vs MR ----------------------------
    auto* sinr_cmd =
        app.add_subcommand("sinr-eval", "Multi-user SINR under optimum and MR combining");
    std::string sinr_input;
    int sinr_trial = 1;
    CommonOptions sinr_opts;
    sinr_cmd->add_option("--input", sinr_input, "Dataset file")
        ->required()
        ->check(CLI::ExistingFile);
    sinr_cmd->add_option("--trial", sinr_trial, "Trial (flight) to evaluate");
    sinr_opts.attach(sinr_cmd);
    sinr_cmd->callback([&] {
        const cfsound::RunConfig config = sinr_opts.load();
        const cfsound::SoundingDataset dataset =
            run_stage("read", [&] { return cfsound::read_dataset(sinr_input); });
        const auto out_path = sinr_opts.prepare_out_dir();
        run_stage("sinr-eval", [&] {
            const cfsound::CampaignView view =
                cfsound::make_campaign_view(dataset, sinr_trial);
            cfsound::SinrEvalConfig eval;
            eval.ap_counts = config.sinr_eval.ap_counts;
            eval.n_subsets = config.sinr_eval.n_subsets;
            eval.aggregation = config.sinr_eval.aggregation;
            eval.cdf_points = config.sinr_eval.cdf_points;
            eval.power = config.uplink_power();
            eval.seed = config.environment.seed;
            eval.n_threads = config.n_threads;
            const cfsound::SinrEvalResult result = cfsound::multi_user_sinr_eval(view, eval);
            const auto summary_path = (out_path / "sinr_eval.csv").string();
            auto summary_out = cfsound::detail::open_output(summary_path);
            cfsound::write_sinr_eval_csv(result, summary_out);
            emit(summary_path);
            const auto cdf_path = (out_path / "sinr_cdf.csv").string();
            auto cdf_out = cfsound::detail::open_output(cdf_path);
            cfsound::write_sinr_cdf_csv(result, cdf_out);
            emit(cdf_path);
        });
    });

    // --- repro: RMS gain error between two flights ---------------------------
    auto* repro_cmd =
        app.add_subcommand("repro", "RMS gain error between two flights of one plan");
    std::string repro_input;
    int repro_ue = 0;
    int repro_trial_a = 0;
    int repro_trial_b = 0;
    CommonOptions repro_opts;
    repro_cmd->add_option("--input", repro_input, "Dataset file")
        ->required()
        ->check(CLI::ExistingFile);
    repro_cmd->add_option("--ue", repro_ue, "UE to evaluate (default: config repro.ue_id)");
    repro_cmd->add_option("--trial-a", repro_trial_a, "Reference trial");
    repro_cmd->add_option("--trial-b", repro_trial_b, "Re-flight trial");
    repro_opts.attach(repro_cmd, false);
    repro_cmd->callback([&] {
        const cfsound::RunConfig config = repro_opts.load();
        const cfsound::SoundingDataset dataset =
            run_stage("read", [&] { return cfsound::read_dataset(repro_input); });
        const auto out_path = repro_opts.prepare_out_dir();
        run_stage("repro", [&] {
            const int ue = repro_cmd->count("--ue") ? repro_ue : config.repro.ue_id;
            const int a =
                repro_cmd->count("--trial-a") ? repro_trial_a : config.repro.trial_a;
            const int b =
                repro_cmd->count("--trial-b") ? repro_trial_b : config.repro.trial_b;
            const double rms = cfsound::reproducibility_rms_db(dataset, ue, a, b);
            const std::vector<std::pair<int, double>> rows = {{ue, rms}};
            const auto path = (out_path / "repro.csv").string();
            auto out = cfsound::detail::open_output(path);
            cfsound::write_repro_csv(rows, out);
            emit(path);
        });
    });

    // --- import: external capture log -> native dataset ----------------------
    auto* import_cmd =
        app.add_subcommand("import", "Convert an external capture log to a dataset");
    std::string import_input;
    std::string import_mapping;
    std::string import_output;
    int import_format_version = cfsound::kDatasetFormatVersion;
    CommonOptions import_opts;
    import_cmd->add_option("--input", import_input, "External capture log")
        ->required()
        ->check(CLI::ExistingFile);
    import_cmd->add_option("--mapping", import_mapping, "Column mapping spec (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    import_cmd->add_option("--output", import_output,
                           "Output dataset path (default: <out-dir>/imported_dataset.dat)");
    import_cmd->add_option("--format-version", import_format_version,
                           "Dataset format version to write");
    import_opts.attach(import_cmd, false);
    import_cmd->callback([&] {
        check_format_version(import_format_version);
        const auto out_path = import_opts.prepare_out_dir();
        const cfsound::ImportResult result = run_stage("import", [&] {
            const cfsound::ImportMapping mapping =
                cfsound::load_import_mapping_file(import_mapping);
            return cfsound::import_external(import_input, mapping);
        });
        for (const auto& warning : result.warnings)
            std::cerr << "warning[import]: " << warning << '\n';
        const std::string path = import_output.empty()
                                     ? (out_path / "imported_dataset.dat").string()
                                     : import_output;
        run_stage("io", [&] { cfsound::write_dataset(result.dataset, path); });
        emit(path);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const cfsound::StageError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error[cli]: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
