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
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfsound/geometry.hpp"

namespace cfsound {

// Campaign-level metadata shared by every record of a dataset.
struct DatasetMeta {
    int format_version = 1;
    double carrier_hz = 3.5e9;
    double bandwidth_hz = 46e6;
    int f_points = 64; // frequency realizations per record (F)
    double speed_mps = 4.0;
    double capture_interval_s = 0.05;
    double altitude_m = 35.0;
    std::uint64_t environment_seed = 1;

    friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

// Complex transfer values between one AP position and one UE over F frequency
// realizations. `ap_position` is the nominal capture position; re-flight
// jitter displaces where the channel was actually sampled but is not
// observable in the record, matching how a real sounder logs its trajectory.
struct ChannelRecord {
    int ap_index = 0;
    Vec3 ap_position;
    int ue_id = 0;
    int trial = 1;
    std::vector<std::complex<double>> samples;

    friend bool operator==(const ChannelRecord&, const ChannelRecord&) = default;
};

inline void validate_record(const ChannelRecord& r) {
    if (r.ap_index < 0)
        throw std::invalid_argument("ChannelRecord: ap_index must be >= 0.");
    if (r.ue_id < 0)
        throw std::invalid_argument("ChannelRecord: ue_id must be >= 0.");
    if (r.trial < 1)
        throw std::invalid_argument("ChannelRecord: trial must be >= 1.");
    if (!std::isfinite(r.ap_position.x) || !std::isfinite(r.ap_position.y) ||
        !std::isfinite(r.ap_position.z))
        throw std::invalid_argument("ChannelRecord: non-finite capture position.");
    if (r.samples.empty())
        throw std::invalid_argument("ChannelRecord: invalid record, no samples (F must be >= 1).");
    for (const auto& s : r.samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw std::invalid_argument("ChannelRecord: non-finite sample.");
}

// Ordered collection of ChannelRecords along a trajectory: grouped by
// (ue_id, trial), within a group ap_index runs contiguously 0..L-1.
struct SoundingDataset {
    DatasetMeta meta;
    std::vector<ChannelRecord> records;

    friend bool operator==(const SoundingDataset&, const SoundingDataset&) = default;

    // Contiguous slice for one flight; empty span when absent.
    std::span<const ChannelRecord> records_for(int ue_id, int trial) const {
        std::size_t begin = records.size();
        std::size_t end = begin;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].ue_id == ue_id && records[i].trial == trial) {
                begin = i;
                end = i;
                while (end < records.size() && records[end].ue_id == ue_id &&
                       records[end].trial == trial)
                    ++end;
                break;
            }
        }
        return {records.data() + begin, end - begin};
    }

    std::vector<int> ue_ids() const {
        std::vector<int> ids;
        for (const auto& r : records)
            if (std::find(ids.begin(), ids.end(), r.ue_id) == ids.end())
                ids.push_back(r.ue_id);
        return ids;
    }

    std::vector<int> trials_for(int ue_id) const {
        std::vector<int> trials;
        for (const auto& r : records)
            if (r.ue_id == ue_id &&
                std::find(trials.begin(), trials.end(), r.trial) == trials.end())
                trials.push_back(r.trial);
        return trials;
    }

    // Enforces the structural invariants: one contiguous run per (ue, trial),
    // ap_index 0..L-1 inside each run, a common F equal to meta.f_points.
    void validate() const {
        if (meta.f_points < 1)
            throw std::invalid_argument("SoundingDataset: metadata F must be >= 1.");
        std::vector<std::pair<int, int>> seen;
        std::size_t i = 0;
        while (i < records.size()) {
            const int ue = records[i].ue_id;
            const int trial = records[i].trial;
            for (const auto& key : seen)
                if (key.first == ue && key.second == trial)
                    throw std::invalid_argument(
                        "SoundingDataset: records for (ue " + std::to_string(ue) +
                        ", trial " + std::to_string(trial) + ") are not contiguous.");
            seen.emplace_back(ue, trial);
            int expected = 0;
            while (i < records.size() && records[i].ue_id == ue && records[i].trial == trial) {
                const auto& r = records[i];
                validate_record(r);
                if (r.ap_index != expected)
                    throw std::invalid_argument(
                        "SoundingDataset: ap_index not contiguous for (ue " +
                        std::to_string(ue) + ", trial " + std::to_string(trial) +
                        "): expected " + std::to_string(expected) + ", got " +
                        std::to_string(r.ap_index) + ".");
                if (static_cast<int>(r.samples.size()) != meta.f_points)
                    throw std::invalid_argument(
                        "SoundingDataset: record F = " + std::to_string(r.samples.size()) +
                        " does not match metadata F = " + std::to_string(meta.f_points) + ".");
                ++expected;
                ++i;
            }
        }
    }
};

// Per-AP gain in dB for one flight (one (ue, trial) pair over L positions).
struct GainProfile {
    int ue_id = 0;
    int trial = 1;
    std::vector<double> gain_db;
};

} // namespace cfsound
