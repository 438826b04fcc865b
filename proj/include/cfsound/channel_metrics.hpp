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
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include "cfsound/records.hpp"

namespace cfsound {

// All dB values in this library are power dB (10 log10).
inline double db_from_linear(double gain) {
    if (gain < 0.0)
        throw std::invalid_argument("db_from_linear: negative power gain.");
    if (gain == 0.0)
        return -std::numeric_limits<double>::infinity(); // no-signal sentinel
    return 10.0 * std::log10(gain);
}

inline double linear_from_db(double db) {
    return std::pow(10.0, db / 10.0);
}

// Mean power gain over the F frequency realizations of one record.
inline double average_gain(const ChannelRecord& record) {
    if (record.samples.empty())
        throw std::invalid_argument("average_gain: invalid record, no samples.");
    double sum = 0.0;
    for (const auto& h : record.samples)
        sum += std::norm(h);
    return sum / static_cast<double>(record.samples.size());
}

// Per-record gain in dB. A zero average gain maps to the -inf no-signal
// sentinel rather than an error: blocked synthetic links may underflow.
inline double gain_db(const ChannelRecord& record) {
    return db_from_linear(average_gain(record));
}

// Synthesizes an omnidirectional UE antenna from several port records of the
// same AP-UE link by incoherent combining: the output per-realization power
// is the mean of the port powers, the phase is taken from the first port.
// Coherent summation would fabricate array gain a single-antenna UE does not
// have.
inline ChannelRecord synthesize_omni(std::span<const ChannelRecord> port_records) {
    if (port_records.empty())
        throw std::invalid_argument("synthesize_omni: no port records.");
    const ChannelRecord& first = port_records.front();
    const std::size_t f = first.samples.size();
    if (f == 0)
        throw std::invalid_argument("synthesize_omni: invalid record, no samples.");
    for (const auto& r : port_records) {
        if (r.ap_index != first.ap_index || r.ue_id != first.ue_id || r.trial != first.trial)
            throw std::invalid_argument(
                "synthesize_omni: incompatible ports, identity fields differ.");
        if (r.samples.size() != f)
            throw std::invalid_argument("synthesize_omni: incompatible ports, F differs.");
    }

    ChannelRecord out = first;
    for (std::size_t i = 0; i < f; ++i) {
        double mean_power = 0.0;
        for (const auto& r : port_records)
            mean_power += std::norm(r.samples[i]);
        mean_power /= static_cast<double>(port_records.size());

        const std::complex<double> ref = first.samples[i];
        const double mag = std::abs(ref);
        const std::complex<double> phase =
            mag > 0.0 ? ref / mag : std::complex<double>(1.0, 0.0);
        out.samples[i] = std::sqrt(mean_power) * phase;
    }
    return out;
}

// Extracts the L-point gain profile of one flight.
inline GainProfile gain_profile(const SoundingDataset& dataset, int ue_id, int trial) {
    const auto span = dataset.records_for(ue_id, trial);
    if (span.empty())
        throw std::invalid_argument("gain_profile: no records for (ue " +
                                    std::to_string(ue_id) + ", trial " +
                                    std::to_string(trial) + ").");
    GainProfile profile;
    profile.ue_id = ue_id;
    profile.trial = trial;
    profile.gain_db.reserve(span.size());
    for (const auto& r : span)
        profile.gain_db.push_back(gain_db(r));
    return profile;
}

// RMS difference in dB between two gain profiles of the same UE, the
// trajectory reproducibility metric.
inline double rms_gain_error(const GainProfile& a, const GainProfile& b) {
    if (a.ue_id != b.ue_id)
        throw std::invalid_argument("rms_gain_error: profiles belong to different UEs.");
    if (a.gain_db.size() != b.gain_db.size())
        throw std::invalid_argument(
            "rms_gain_error: trajectory mismatch, profile lengths " +
            std::to_string(a.gain_db.size()) + " vs " + std::to_string(b.gain_db.size()) + ".");
    if (a.gain_db.empty())
        throw std::invalid_argument("rms_gain_error: empty profiles.");
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < a.gain_db.size(); ++i) {
        const double d = a.gain_db[i] - b.gain_db[i];
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(a.gain_db.size()));
}

} // namespace cfsound
