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

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <cfsound/channel_metrics.hpp>
#include <cfsound/records.hpp>

using namespace cfsound;
using cdouble = std::complex<double>;

namespace {

ChannelRecord make_record(int ap, std::vector<cdouble> h, int ue = 1, int trial = 1) {
    ChannelRecord r;
    r.ue_id = ue;
    r.trial = trial;
    r.ap_index = ap;
    r.ap_position = {1.0 * ap, 2.0, 35.0};
    r.samples = std::move(h);
    return r;
}

SoundingDataset make_dataset(std::vector<ChannelRecord> records, int f_points) {
    SoundingDataset ds;
    ds.meta.f_points = f_points;
    ds.records = std::move(records);
    ds.validate();
    return ds;
}

} // namespace

TEST_CASE("db conversions round trip and reject negatives", "[metrics]") {
    CHECK(db_from_linear(1.0) == 0.0);
    CHECK(db_from_linear(100.0) == Catch::Approx(20.0).margin(1e-12));
    CHECK(linear_from_db(-30.0) == Catch::Approx(1e-3).margin(1e-15));
    CHECK(db_from_linear(linear_from_db(-57.25)) == Catch::Approx(-57.25).margin(1e-12));
    CHECK(db_from_linear(0.0) == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(db_from_linear(-1e-9), std::invalid_argument);
}

TEST_CASE("frequency-averaged gain of a flat record equals its power", "[metrics]") {
    // Flat |H| = 0.5 over 4 bins: average gain 0.25 -> 10 log10(0.25) dB.
    const ChannelRecord r = make_record(0, std::vector<cdouble>(4, cdouble{0.0, 0.5}));
    CHECK(average_gain(r) == Catch::Approx(0.25).margin(1e-15));
    CHECK(gain_db(r) == Catch::Approx(10.0 * std::log10(0.25)).margin(1e-12));
}

TEST_CASE("frequency averaging divides by the bin count", "[metrics]") {
    // Two bins with powers 1 and 0 -> average 0.5 -> ~-3.0103 dB.
    const ChannelRecord r = make_record(0, {cdouble{1.0, 0.0}, cdouble{0.0, 0.0}});
    CHECK(average_gain(r) == Catch::Approx(0.5).margin(1e-15));
    CHECK(gain_db(r) == Catch::Approx(10.0 * std::log10(0.5)).margin(1e-12));
    CHECK_THROWS_AS(average_gain(ChannelRecord{}), std::invalid_argument);
}

TEST_CASE("all-zero record maps to the -inf sentinel", "[metrics]") {
    const ChannelRecord r = make_record(0, std::vector<cdouble>(3, cdouble{0.0, 0.0}));
    CHECK(average_gain(r) == 0.0);
    CHECK(gain_db(r) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("omni synthesis averages port powers incoherently", "[metrics]") {
    // Two ports, one bin each: powers 4 and 0 -> omni power 2 per bin.
    const std::vector<ChannelRecord> ports = {
        make_record(3, {cdouble{2.0, 0.0}}),
        make_record(3, {cdouble{0.0, 0.0}}),
    };
    const ChannelRecord omni = synthesize_omni(ports);
    REQUIRE(omni.samples.size() == 1);
    CHECK(omni.ap_index == 3);
    CHECK(std::norm(omni.samples[0]) == Catch::Approx(2.0).margin(1e-15));
    // Phase is carried from the first port.
    CHECK(std::arg(omni.samples[0]) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("omni synthesis of identical ports is a power identity", "[metrics]") {
    const std::vector<cdouble> h = {{0.3, -0.4}, {1.0, 2.0}};
    const std::vector<ChannelRecord> ports = {make_record(0, h), make_record(0, h),
                                              make_record(0, h)};
    const ChannelRecord omni = synthesize_omni(ports);
    REQUIRE(omni.samples.size() == h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        CHECK(std::norm(omni.samples[i]) == Catch::Approx(std::norm(h[i])).margin(1e-12));
        CHECK(std::arg(omni.samples[i]) == Catch::Approx(std::arg(h[i])).margin(1e-12));
    }
    CHECK_THROWS_AS(synthesize_omni(std::vector<ChannelRecord>{}), std::invalid_argument);
    const std::vector<ChannelRecord> mismatched = {make_record(0, h),
                                                   make_record(0, {h[0]})};
    CHECK_THROWS_AS(synthesize_omni(mismatched), std::invalid_argument);
    const std::vector<ChannelRecord> wrong_link = {make_record(0, h), make_record(1, h)};
    CHECK_THROWS_AS(synthesize_omni(wrong_link), std::invalid_argument);
}

TEST_CASE("gain profile follows the capture schedule", "[metrics]") {
    std::vector<ChannelRecord> records;
    records.push_back(make_record(0, {cdouble{1.0, 0.0}}));
    records.push_back(make_record(1, {cdouble{2.0, 0.0}}));
    records.push_back(make_record(2, {cdouble{0.5, 0.0}}));
    const SoundingDataset ds = make_dataset(std::move(records), 1);
    const GainProfile profile = gain_profile(ds, 1, 1);
    REQUIRE(profile.gain_db.size() == 3);
    CHECK(profile.ue_id == 1);
    CHECK(profile.trial == 1);
    CHECK(profile.gain_db[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(profile.gain_db[1] == Catch::Approx(20.0 * std::log10(2.0)).margin(1e-12));
    CHECK(profile.gain_db[2] == Catch::Approx(-20.0 * std::log10(2.0)).margin(1e-12));
    CHECK_THROWS_AS(gain_profile(ds, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(gain_profile(ds, 9, 1), std::invalid_argument);
}

TEST_CASE("rms gain error matches the hand-computed value", "[metrics]") {
    // Per-position gains differing by exactly {1, -1, 1, -1} dB -> RMS 1 dB.
    GainProfile a;
    a.ue_id = 2;
    a.gain_db = {-60.0, -62.0, -64.0, -66.0};
    GainProfile b;
    b.ue_id = 2;
    b.gain_db = {-61.0, -61.0, -65.0, -65.0};
    CHECK(rms_gain_error(a, b) == Catch::Approx(1.0).margin(1e-12));
    CHECK(rms_gain_error(a, a) == 0.0);

    GainProfile short_profile;
    short_profile.ue_id = 2;
    short_profile.gain_db = {-60.0};
    CHECK_THROWS_AS(rms_gain_error(a, short_profile), std::invalid_argument);
    GainProfile other_ue = b;
    other_ue.ue_id = 3;
    CHECK_THROWS_AS(rms_gain_error(a, other_ue), std::invalid_argument);
    GainProfile empty_a;
    GainProfile empty_b;
    CHECK_THROWS_AS(rms_gain_error(empty_a, empty_b), std::invalid_argument);
}
