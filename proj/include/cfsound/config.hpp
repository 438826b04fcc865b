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
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfsound/analysis.hpp"
#include "cfsound/combining.hpp"
#include "cfsound/dataset_io.hpp"
#include "cfsound/environment.hpp"
#include "cfsound/flight.hpp"

namespace cfsound {

struct SweepSettings {
    std::vector<int> ap_counts = {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    int n_subsets = 10000;
};

struct SinrSettings {
    std::vector<int> ap_counts = {64, 256};
    int n_subsets = 200;
    FrequencyAggregation aggregation = FrequencyAggregation::kPerRealization;
    int cdf_points = 101;
};

struct ReproSettings {
    int ue_id = 2;
    int trial_a = 1;
    int trial_b = 2;
};

// Full description of one campaign run: environment, flights, terminals,
// link budget and analysis settings. Everything an output file depends on
// lives here or in the master seed (environment.seed).
struct RunConfig {
    EnvironmentModel environment;
    std::vector<FlightPlan> flights;
    std::vector<UserTerminal> ues;
    double p_tx_dbm = 0.0;
    double noise_dbm = -90.0;
    int n_trials = 2;
    double jitter_sigma_m = 0.1;
    SweepSettings snr_sweep;
    SinrSettings sinr_eval;
    ReproSettings repro;
    std::vector<std::string> analyses = {"gain-map", "snr-sweep", "sinr-eval", "repro"};
    bool write_datasets = false;
    int n_threads = 1;

    UplinkPower uplink_power() const {
        return {std::pow(10.0, p_tx_dbm / 10.0), std::pow(10.0, noise_dbm / 10.0)};
    }

    void validate() const {
        environment.validate();
        if (flights.empty())
            throw std::runtime_error("config: at least one flight plan is required.");
        for (const auto& plan : flights)
            plan.validate();
        for (std::size_t i = 0; i < flights.size(); ++i)
            for (std::size_t j = i + 1; j < flights.size(); ++j)
                if (flights[i].altitude_m == flights[j].altitude_m)
                    throw std::runtime_error(
                        "config: flight altitudes must be distinct (they key the output "
                        "file names).");
        if (ues.empty())
            throw std::runtime_error("config: at least one UE is required.");
        for (std::size_t i = 0; i < ues.size(); ++i) {
            if (!environment.contains(ues[i].position))
                throw std::runtime_error("config: ue_id " + std::to_string(ues[i].ue_id) +
                                         " lies outside the area.");
            for (std::size_t j = i + 1; j < ues.size(); ++j)
                if (ues[i].ue_id == ues[j].ue_id)
                    throw std::runtime_error("config: ue_id " +
                                             std::to_string(ues[i].ue_id) +
                                             " is defined more than once.");
        }
        if (n_trials < 1)
            throw std::runtime_error("config: n_trials must be >= 1.");
        if (jitter_sigma_m < 0.0)
            throw std::runtime_error("config: jitter_sigma_m must be >= 0.");
        if (snr_sweep.ap_counts.empty() || sinr_eval.ap_counts.empty())
            throw std::runtime_error("config: ap_counts must not be empty.");
        for (int c : snr_sweep.ap_counts)
            if (c < 1)
                throw std::runtime_error("config: snr_sweep ap_counts must be >= 1.");
        for (int c : sinr_eval.ap_counts)
            if (c < 1)
                throw std::runtime_error("config: sinr_eval ap_counts must be >= 1.");
        if (snr_sweep.n_subsets < 1 || sinr_eval.n_subsets < 1)
            throw std::runtime_error("config: n_subsets must be >= 1.");
        if (sinr_eval.cdf_points < 2)
            throw std::runtime_error("config: cdf_points must be >= 2.");
        if (n_threads < 0)
            throw std::runtime_error("config: n_threads must be >= 0 (0 = auto).");
        uplink_power().validate();

        static const std::vector<std::string> kKnownAnalyses = {"gain-map", "snr-sweep",
                                                                "sinr-eval", "repro"};
        for (std::size_t i = 0; i < analyses.size(); ++i) {
            bool known = false;
            for (const auto& a : kKnownAnalyses)
                known = known || analyses[i] == a;
            if (!known)
                throw std::runtime_error("config: unknown analysis '" + analyses[i] + "'.");
            for (std::size_t j = i + 1; j < analyses.size(); ++j)
                if (analyses[i] == analyses[j])
                    throw std::runtime_error("config: analysis '" + analyses[i] +
                                             "' listed more than once.");
        }
        const bool wants_repro =
            std::find(analyses.begin(), analyses.end(), "repro") != analyses.end();
        if (wants_repro) {
            bool found = false;
            for (const auto& ue : ues)
                found = found || ue.ue_id == repro.ue_id;
            if (!found)
                throw std::runtime_error("config: repro.ue_id " +
                                         std::to_string(repro.ue_id) +
                                         " does not reference a defined UE.");
            if (repro.trial_a < 1 || repro.trial_b < 1 || repro.trial_a > n_trials ||
                repro.trial_b > n_trials)
                throw std::runtime_error("config: repro trials must lie in [1, n_trials].");
        }
    }
};

// Default campaign: the 400 m x 200 m area with a mixed building layout,
// a perimeter loop flown at 35 m and 70 m, and four terminals ranging from
// heavily shadowed (ue 1) to open (ue 2) to closely spaced (ue 3/4).
inline RunConfig default_run_config() {
    RunConfig config;
    config.environment.buildings = {
        {290.0, 315.0, 45.0, 85.0, 45.0},  {315.0, 355.0, 65.0, 85.0, 40.0},
        {360.0, 385.0, 45.0, 85.0, 45.0},  {225.0, 255.0, 85.0, 115.0, 35.0},
        {40.0, 80.0, 130.0, 155.0, 30.0},  {90.0, 130.0, 150.0, 180.0, 25.0},
        {120.0, 160.0, 40.0, 75.0, 50.0},  {30.0, 70.0, 30.0, 60.0, 35.0},
        {230.0, 260.0, 150.0, 180.0, 45.0}};
    config.flights = {default_loop_plan(400.0, 200.0, 35.0),
                      default_loop_plan(400.0, 200.0, 70.0)};
    config.ues = {{1, {330.0, 40.0, 1.5}},
                  {2, {200.0, 100.0, 1.5}},
                  {3, {60.0, 170.0, 1.5}},
                  {4, {52.0, 170.0, 1.5}}};
    return config;
}

namespace detail {

inline void check_keys(const nlohmann::json& obj,
                       std::initializer_list<const char*> allowed, const char* where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            known = known || item.key() == key;
        if (!known)
            throw std::runtime_error(std::string("config: unknown key '") + item.key() +
                                     "' in " + where + ".");
    }
}

inline void expect_object(const nlohmann::json& obj, const char* where) {
    if (!obj.is_object())
        throw std::runtime_error(std::string("config: ") + where + " must be an object.");
}

inline void read_double(const nlohmann::json& obj, const char* key, double& out,
                        const char* where) {
    if (!obj.contains(key))
        return;
    if (!obj[key].is_number())
        throw std::runtime_error(std::string("config: '") + key + "' in " + where +
                                 " must be a number.");
    out = obj[key].get<double>();
}

inline void read_int(const nlohmann::json& obj, const char* key, int& out,
                     const char* where) {
    if (!obj.contains(key))
        return;
    if (!obj[key].is_number_integer())
        throw std::runtime_error(std::string("config: '") + key + "' in " + where +
                                 " must be an integer.");
    out = obj[key].get<int>();
}

inline void read_bool(const nlohmann::json& obj, const char* key, bool& out,
                      const char* where) {
    if (!obj.contains(key))
        return;
    if (!obj[key].is_boolean())
        throw std::runtime_error(std::string("config: '") + key + "' in " + where +
                                 " must be a boolean.");
    out = obj[key].get<bool>();
}

// Rician K fields: a finite number, null / "-inf" (pure Rayleigh), or "inf"
// (pure LOS). JSON has no infinity literal, hence the spellings.
inline void read_k_factor(const nlohmann::json& obj, const char* key, double& out,
                          const char* where) {
    if (!obj.contains(key))
        return;
    const auto& v = obj[key];
    if (v.is_null())
        out = -std::numeric_limits<double>::infinity();
    else if (v.is_number())
        out = v.get<double>();
    else if (v.is_string() && v.get<std::string>() == "inf")
        out = std::numeric_limits<double>::infinity();
    else if (v.is_string() && v.get<std::string>() == "-inf")
        out = -std::numeric_limits<double>::infinity();
    else
        throw std::runtime_error(std::string("config: '") + key + "' in " + where +
                                 " must be a number, null, \"inf\" or \"-inf\".");
}

inline nlohmann::json k_factor_to_json(double k_db) {
    if (std::isinf(k_db))
        return k_db > 0.0 ? nlohmann::json("inf") : nlohmann::json(nullptr);
    return k_db;
}

inline std::vector<int> read_int_array(const nlohmann::json& arr, const char* where) {
    if (!arr.is_array() || arr.empty())
        throw std::runtime_error(std::string("config: ") + where +
                                 " must be a non-empty array.");
    std::vector<int> out;
    for (const auto& v : arr) {
        if (!v.is_number_integer())
            throw std::runtime_error(std::string("config: ") + where +
                                     " must contain integers only.");
        out.push_back(v.get<int>());
    }
    return out;
}

} // namespace detail

inline RunConfig load_run_config(const nlohmann::json& root) {
    detail::expect_object(root, "the top level");
    detail::check_keys(root,
                       {"environment", "flights", "ues", "power", "sounding", "snr_sweep",
                        "sinr_eval", "repro", "analyses", "write_datasets", "n_threads"},
                       "the top level");
    RunConfig config = default_run_config();

    if (root.contains("environment")) {
        const auto& env = root["environment"];
        detail::expect_object(env, "environment");
        detail::check_keys(env,
                           {"x_extent_m", "y_extent_m", "carrier_hz", "bandwidth_hz",
                            "f_points", "pathloss_exponent_los", "pathloss_exponent_nlos",
                            "building_penetration_db", "shadowing_sigma_db",
                            "shadowing_decorrelation_m", "rician_k_los_db",
                            "rician_k_nlos_db", "n_multipath_taps", "max_excess_delay_s",
                            "seed", "buildings"},
                           "environment");
        auto& e = config.environment;
        detail::read_double(env, "x_extent_m", e.x_extent_m, "environment");
        detail::read_double(env, "y_extent_m", e.y_extent_m, "environment");
        detail::read_double(env, "carrier_hz", e.carrier_hz, "environment");
        detail::read_double(env, "bandwidth_hz", e.bandwidth_hz, "environment");
        detail::read_int(env, "f_points", e.f_points, "environment");
        detail::read_double(env, "pathloss_exponent_los", e.pathloss_exponent_los,
                            "environment");
        detail::read_double(env, "pathloss_exponent_nlos", e.pathloss_exponent_nlos,
                            "environment");
        detail::read_double(env, "building_penetration_db", e.building_penetration_db,
                            "environment");
        detail::read_double(env, "shadowing_sigma_db", e.shadowing_sigma_db, "environment");
        detail::read_double(env, "shadowing_decorrelation_m", e.shadowing_decorrelation_m,
                            "environment");
        detail::read_k_factor(env, "rician_k_los_db", e.rician_k_los_db, "environment");
        detail::read_k_factor(env, "rician_k_nlos_db", e.rician_k_nlos_db, "environment");
        detail::read_int(env, "n_multipath_taps", e.n_multipath_taps, "environment");
        detail::read_double(env, "max_excess_delay_s", e.max_excess_delay_s, "environment");
        if (env.contains("seed")) {
            if (!env["seed"].is_number_unsigned())
                throw std::runtime_error(
                    "config: 'seed' in environment must be a nonnegative integer.");
            e.seed = env["seed"].get<std::uint64_t>();
        }
        if (env.contains("buildings")) {
            if (!env["buildings"].is_array())
                throw std::runtime_error("config: environment buildings must be an array.");
            e.buildings.clear();
            for (const auto& b : env["buildings"]) {
                detail::expect_object(b, "a building");
                detail::check_keys(b, {"x_min", "x_max", "y_min", "y_max", "height_m"},
                                   "a building");
                BuildingBox box{};
                detail::read_double(b, "x_min", box.x_min, "a building");
                detail::read_double(b, "x_max", box.x_max, "a building");
                detail::read_double(b, "y_min", box.y_min, "a building");
                detail::read_double(b, "y_max", box.y_max, "a building");
                detail::read_double(b, "height_m", box.height_m, "a building");
                e.buildings.push_back(box);
            }
        }
    }

    if (root.contains("flights")) {
        if (!root["flights"].is_array() || root["flights"].empty())
            throw std::runtime_error("config: flights must be a non-empty array.");
        config.flights.clear();
        for (const auto& f : root["flights"]) {
            detail::expect_object(f, "a flight");
            detail::check_keys(
                f, {"altitude_m", "speed_mps", "capture_interval_s", "waypoints_m"},
                "a flight");
            FlightPlan plan = default_loop_plan(config.environment.x_extent_m,
                                                config.environment.y_extent_m);
            detail::read_double(f, "altitude_m", plan.altitude_m, "a flight");
            detail::read_double(f, "speed_mps", plan.speed_mps, "a flight");
            detail::read_double(f, "capture_interval_s", plan.capture_interval_s,
                                "a flight");
            if (f.contains("waypoints_m")) {
                if (!f["waypoints_m"].is_array() || f["waypoints_m"].size() < 2)
                    throw std::runtime_error(
                        "config: waypoints_m must be an array of at least two [x, y] "
                        "pairs.");
                plan.waypoints_m.clear();
                for (const auto& w : f["waypoints_m"]) {
                    if (!w.is_array() || w.size() != 2 || !w[0].is_number() ||
                        !w[1].is_number())
                        throw std::runtime_error(
                            "config: each waypoint must be an [x, y] number pair.");
                    plan.waypoints_m.push_back({w[0].get<double>(), w[1].get<double>()});
                }
            }
            config.flights.push_back(std::move(plan));
        }
    }

    if (root.contains("ues")) {
        if (!root["ues"].is_array() || root["ues"].empty())
            throw std::runtime_error("config: ues must be a non-empty array.");
        config.ues.clear();
        for (const auto& u : root["ues"]) {
            detail::expect_object(u, "a ue");
            detail::check_keys(u, {"ue_id", "x_m", "y_m", "z_m"}, "a ue");
            UserTerminal ue;
            detail::read_int(u, "ue_id", ue.ue_id, "a ue");
            detail::read_double(u, "x_m", ue.position.x, "a ue");
            detail::read_double(u, "y_m", ue.position.y, "a ue");
            detail::read_double(u, "z_m", ue.position.z, "a ue");
            config.ues.push_back(ue);
        }
    }

    if (root.contains("power")) {
        const auto& p = root["power"];
        detail::expect_object(p, "power");
        detail::check_keys(p, {"p_tx_dbm", "noise_dbm"}, "power");
        detail::read_double(p, "p_tx_dbm", config.p_tx_dbm, "power");
        detail::read_double(p, "noise_dbm", config.noise_dbm, "power");
    }

    if (root.contains("sounding")) {
        const auto& s = root["sounding"];
        detail::expect_object(s, "sounding");
        detail::check_keys(s, {"n_trials", "jitter_sigma_m"}, "sounding");
        detail::read_int(s, "n_trials", config.n_trials, "sounding");
        detail::read_double(s, "jitter_sigma_m", config.jitter_sigma_m, "sounding");
    }

    if (root.contains("snr_sweep")) {
        const auto& s = root["snr_sweep"];
        detail::expect_object(s, "snr_sweep");
        detail::check_keys(s, {"ap_counts", "n_subsets"}, "snr_sweep");
        if (s.contains("ap_counts"))
            config.snr_sweep.ap_counts =
                detail::read_int_array(s["ap_counts"], "snr_sweep.ap_counts");
        detail::read_int(s, "n_subsets", config.snr_sweep.n_subsets, "snr_sweep");
    }

    if (root.contains("sinr_eval")) {
        const auto& s = root["sinr_eval"];
        detail::expect_object(s, "sinr_eval");
        detail::check_keys(s, {"ap_counts", "n_subsets", "aggregation", "cdf_points"},
                           "sinr_eval");
        if (s.contains("ap_counts"))
            config.sinr_eval.ap_counts =
                detail::read_int_array(s["ap_counts"], "sinr_eval.ap_counts");
        detail::read_int(s, "n_subsets", config.sinr_eval.n_subsets, "sinr_eval");
        detail::read_int(s, "cdf_points", config.sinr_eval.cdf_points, "sinr_eval");
        if (s.contains("aggregation")) {
            const auto& a = s["aggregation"];
            if (a.is_string() && a.get<std::string>() == "per_realization")
                config.sinr_eval.aggregation = FrequencyAggregation::kPerRealization;
            else if (a.is_string() && a.get<std::string>() == "record_mean")
                config.sinr_eval.aggregation = FrequencyAggregation::kRecordMean;
            else
                throw std::runtime_error(
                    "config: sinr_eval.aggregation must be \"per_realization\" or "
                    "\"record_mean\".");
        }
    }

    if (root.contains("repro")) {
        const auto& r = root["repro"];
        detail::expect_object(r, "repro");
        detail::check_keys(r, {"ue_id", "trial_a", "trial_b"}, "repro");
        detail::read_int(r, "ue_id", config.repro.ue_id, "repro");
        detail::read_int(r, "trial_a", config.repro.trial_a, "repro");
        detail::read_int(r, "trial_b", config.repro.trial_b, "repro");
    }

    if (root.contains("analyses")) {
        if (!root["analyses"].is_array())
            throw std::runtime_error("config: analyses must be an array of strings.");
        config.analyses.clear();
        for (const auto& a : root["analyses"]) {
            if (!a.is_string())
                throw std::runtime_error("config: analyses must be an array of strings.");
            config.analyses.push_back(a.get<std::string>());
        }
    }

    detail::read_bool(root, "write_datasets", config.write_datasets, "the top level");
    detail::read_int(root, "n_threads", config.n_threads, "the top level");

    config.validate();
    return config;
}

inline RunConfig load_run_config_file(const std::string& path) {
    auto in = detail::open_input(path);
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config: " + path + " is not valid JSON: " + e.what());
    }
    return load_run_config(root);
}

// Serializes a config with every field populated; load(save(config)) is the
// identity and `generate` uses this to emit the resolved configuration.
inline nlohmann::json save_run_config(const RunConfig& config) {
    nlohmann::json env = {
        {"x_extent_m", config.environment.x_extent_m},
        {"y_extent_m", config.environment.y_extent_m},
        {"carrier_hz", config.environment.carrier_hz},
        {"bandwidth_hz", config.environment.bandwidth_hz},
        {"f_points", config.environment.f_points},
        {"pathloss_exponent_los", config.environment.pathloss_exponent_los},
        {"pathloss_exponent_nlos", config.environment.pathloss_exponent_nlos},
        {"building_penetration_db", config.environment.building_penetration_db},
        {"shadowing_sigma_db", config.environment.shadowing_sigma_db},
        {"shadowing_decorrelation_m", config.environment.shadowing_decorrelation_m},
        {"rician_k_los_db", detail::k_factor_to_json(config.environment.rician_k_los_db)},
        {"rician_k_nlos_db", detail::k_factor_to_json(config.environment.rician_k_nlos_db)},
        {"n_multipath_taps", config.environment.n_multipath_taps},
        {"max_excess_delay_s", config.environment.max_excess_delay_s},
        {"seed", config.environment.seed},
    };
    env["buildings"] = nlohmann::json::array();
    for (const auto& b : config.environment.buildings)
        env["buildings"].push_back({{"x_min", b.x_min},
                                    {"x_max", b.x_max},
                                    {"y_min", b.y_min},
                                    {"y_max", b.y_max},
                                    {"height_m", b.height_m}});

    nlohmann::json flights = nlohmann::json::array();
    for (const auto& plan : config.flights) {
        nlohmann::json waypoints = nlohmann::json::array();
        for (const auto& w : plan.waypoints_m)
            waypoints.push_back({w.x, w.y});
        flights.push_back({{"altitude_m", plan.altitude_m},
                           {"speed_mps", plan.speed_mps},
                           {"capture_interval_s", plan.capture_interval_s},
                           {"waypoints_m", waypoints}});
    }

    nlohmann::json ues = nlohmann::json::array();
    for (const auto& ue : config.ues)
        ues.push_back({{"ue_id", ue.ue_id},
                       {"x_m", ue.position.x},
                       {"y_m", ue.position.y},
                       {"z_m", ue.position.z}});

    return nlohmann::json{
        {"environment", env},
        {"flights", flights},
        {"ues", ues},
        {"power", {{"p_tx_dbm", config.p_tx_dbm}, {"noise_dbm", config.noise_dbm}}},
        {"sounding",
         {{"n_trials", config.n_trials}, {"jitter_sigma_m", config.jitter_sigma_m}}},
        {"snr_sweep",
         {{"ap_counts", config.snr_sweep.ap_counts},
          {"n_subsets", config.snr_sweep.n_subsets}}},
        {"sinr_eval",
         {{"ap_counts", config.sinr_eval.ap_counts},
          {"n_subsets", config.sinr_eval.n_subsets},
          {"aggregation",
           config.sinr_eval.aggregation == FrequencyAggregation::kPerRealization
               ? "per_realization"
               : "record_mean"},
          {"cdf_points", config.sinr_eval.cdf_points}}},
        {"repro",
         {{"ue_id", config.repro.ue_id},
          {"trial_a", config.repro.trial_a},
          {"trial_b", config.repro.trial_b}}},
        {"analyses", config.analyses},
        {"write_datasets", config.write_datasets},
        {"n_threads", config.n_threads},
    };
}

} // namespace cfsound
