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

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cfsound/environment.hpp"
#include "cfsound/geometry.hpp"
#include "cfsound/parallel.hpp"
#include "cfsound/records.hpp"
#include "cfsound/rng.hpp"

namespace cfsound {

// Piecewise-linear drone trajectory at constant altitude and speed. A closed
// loop is expressed by repeating the first waypoint at the end.
struct FlightPlan {
    std::vector<Vec2> waypoints_m;
    double altitude_m = 35.0;
    double speed_mps = 4.0;
    double capture_interval_s = 0.05;

    void validate() const {
        if (waypoints_m.size() < 2)
            throw std::invalid_argument("FlightPlan: need at least two waypoints.");
        if (!(altitude_m > 0.0))
            throw std::invalid_argument("FlightPlan: altitude must be positive.");
        if (!(speed_mps > 0.0))
            throw std::invalid_argument("FlightPlan: speed must be positive.");
        if (!(capture_interval_s > 0.0))
            throw std::invalid_argument("FlightPlan: capture interval must be positive.");
        for (std::size_t i = 1; i < waypoints_m.size(); ++i) {
            const double dx = waypoints_m[i].x - waypoints_m[i - 1].x;
            const double dy = waypoints_m[i].y - waypoints_m[i - 1].y;
            if (std::hypot(dx, dy) <= 0.0)
                throw std::invalid_argument("FlightPlan: zero-length trajectory segment.");
        }
    }

    double capture_spacing_m() const { return speed_mps * capture_interval_s; }

    double path_length_m() const {
        double total = 0.0;
        for (std::size_t i = 1; i < waypoints_m.size(); ++i)
            total += std::hypot(waypoints_m[i].x - waypoints_m[i - 1].x,
                                waypoints_m[i].y - waypoints_m[i - 1].y);
        return total;
    }

    // Point at arc length s from the start, clamped to the trajectory ends.
    Vec3 position_at(double s) const {
        double remaining = std::max(s, 0.0);
        for (std::size_t i = 1; i < waypoints_m.size(); ++i) {
            const double dx = waypoints_m[i].x - waypoints_m[i - 1].x;
            const double dy = waypoints_m[i].y - waypoints_m[i - 1].y;
            const double len = std::hypot(dx, dy);
            if (remaining <= len) {
                const double u = remaining / len;
                return {waypoints_m[i - 1].x + u * dx, waypoints_m[i - 1].y + u * dy,
                        altitude_m};
            }
            remaining -= len;
        }
        return {waypoints_m.back().x, waypoints_m.back().y, altitude_m};
    }
};

// Rectangular perimeter loop covering the default 400 m x 200 m area:
// 1200 m of path, which at 4 m/s and 50 ms capture cadence yields 6001
// virtual-array positions spaced 0.2 m apart.
inline FlightPlan default_loop_plan(double x_extent_m = 400.0, double y_extent_m = 200.0,
                                    double altitude_m = 35.0) {
    FlightPlan plan;
    plan.waypoints_m = {{0.0, 0.0}, {x_extent_m, 0.0}, {x_extent_m, y_extent_m},
                        {0.0, y_extent_m}, {0.0, 0.0}};
    plan.altitude_m = altitude_m;
    return plan;
}

// Nominal capture positions along the plan. The count is
// floor(length / spacing) + 1 with a relative tolerance that keeps spacings
// like 0.2 m (inexact in binary) from dropping the final capture.
inline std::vector<Vec3> capture_positions(const FlightPlan& plan) {
    plan.validate();
    const double spacing = plan.capture_spacing_m();
    const double length = plan.path_length_m();
    const auto n_steps =
        static_cast<std::size_t>(std::floor(length / spacing + 1e-9));
    std::vector<Vec3> positions;
    positions.reserve(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i)
        positions.push_back(plan.position_at(static_cast<double>(i) * spacing));
    return positions;
}

struct UserTerminal {
    int ue_id = 0;
    Vec3 position;
};

// Per-flight positioning error. Each trial perturbs every nominal capture
// position by an independent isotropic Gaussian offset; sigma = 0 reproduces
// the nominal trajectory exactly. Offsets are keyed by (seed, trial, capture
// index), so all user terminals sounded during one flight see the same
// perturbed drone position.
inline Vec3 jittered_position(const Vec3& nominal, double sigma_m, std::uint64_t seed,
                              int trial, std::size_t capture_index) {
    if (sigma_m == 0.0)
        return nominal;
    Rng rng(seed_from(seed, RandomStream::kJitter, static_cast<std::uint64_t>(trial),
                      capture_index));
    return {nominal.x + sigma_m * rng.normal(), nominal.y + sigma_m * rng.normal(),
            nominal.z + sigma_m * rng.normal()};
}

struct SoundingOptions {
    int n_trials = 1;
    double jitter_sigma_m = 0.0;
    int n_threads = 1;
};

// Simulates the measurement campaign: flies the plan once per trial, records
// the channel transfer function from every user terminal at every capture
// position. Records carry the nominal positions (what a post-processed
// trajectory log would report); the channel itself is drawn at the jittered
// true position. Output is grouped by (ue, trial) with ap_index following the
// capture schedule, and is independent of the thread count.
inline SoundingDataset simulate_sounding(const SyntheticField& field, const FlightPlan& plan,
                                         std::span<const UserTerminal> ues,
                                         const SoundingOptions& options = {}) {
    if (ues.empty())
        throw std::invalid_argument("simulate_sounding: need at least one user terminal.");
    if (options.n_trials < 0)
        throw std::invalid_argument("simulate_sounding: trial count must be >= 0.");
    if (options.jitter_sigma_m < 0.0)
        throw std::invalid_argument("simulate_sounding: jitter sigma must be >= 0.");
    for (std::size_t i = 0; i < ues.size(); ++i) {
        if (!field.env().contains(ues[i].position))
            throw std::invalid_argument("simulate_sounding: user terminal outside the area.");
        for (std::size_t j = i + 1; j < ues.size(); ++j)
            if (ues[i].ue_id == ues[j].ue_id)
                throw std::invalid_argument("simulate_sounding: duplicate ue_id.");
    }

    const std::vector<Vec3> nominal = capture_positions(plan);
    const std::uint64_t seed = field.env().seed;

    SoundingDataset dataset;
    dataset.meta.carrier_hz = field.env().carrier_hz;
    dataset.meta.bandwidth_hz = field.env().bandwidth_hz;
    dataset.meta.f_points = field.env().f_points;
    dataset.meta.speed_mps = plan.speed_mps;
    dataset.meta.capture_interval_s = plan.capture_interval_s;
    dataset.meta.altitude_m = plan.altitude_m;
    dataset.meta.environment_seed = seed;

    dataset.records.resize(ues.size() * static_cast<std::size_t>(options.n_trials) *
                           nominal.size());
    const std::size_t per_trial = nominal.size();
    const std::size_t per_ue = per_trial * static_cast<std::size_t>(options.n_trials);

    parallel_for(dataset.records.size(), options.n_threads, [&](std::size_t slot) {
        const std::size_t u = slot / per_ue;
        const int trial = static_cast<int>((slot % per_ue) / per_trial) + 1;
        const std::size_t c = slot % per_trial;
        const Vec3 actual =
            jittered_position(nominal[c], options.jitter_sigma_m, seed, trial, c);
        ChannelRecord record =
            field.sample_channel(field.link(actual, ues[u].position), ues[u].ue_id, trial);
        record.ap_index = static_cast<int>(c);
        record.ap_position = nominal[c];
        dataset.records[slot] = std::move(record);
    });
    return dataset;
}

} // namespace cfsound
