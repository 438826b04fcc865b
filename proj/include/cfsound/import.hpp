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
#include <string>
#include <vector>

#include "cfsound/dataset_io.hpp"
#include "cfsound/records.hpp"

namespace cfsound {

// Column correspondence between an external capture log and the native
// record semantics. Column indices are zero-based; `trial` may stay unmapped
// (all records then default to trial 1, with a warning). Multi-port receiver
// logs are imported by mapping each port to its own ue_id.
struct ImportMapping {
    int ue_id = -1;
    int trial = -1;
    int ap_index = -1;
    int x_m = -1;
    int y_m = -1;
    int z_m = -1;
    int samples_start = -1; // first of 2*F interleaved re,im columns
    int f_points = 0;
    std::string position_unit = "m"; // m | cm | mm
    char delimiter = ',';
    int skip_lines = 0; // leading header/comment lines in the source
    DatasetMeta meta;   // metadata for the normalized dataset

    void validate() const {
        const auto require = [](int column, const char* name) {
            if (column < 0)
                throw std::runtime_error(std::string("import: required field '") + name +
                                         "' has no mapped column.");
        };
        require(ue_id, "ue_id");
        require(ap_index, "ap_index");
        require(x_m, "x_m");
        require(y_m, "y_m");
        require(z_m, "z_m");
        require(samples_start, "samples_start");
        if (f_points < 1)
            throw std::runtime_error("import: mapping must declare f_points >= 1.");
        if (position_unit != "m" && position_unit != "cm" && position_unit != "mm")
            throw std::runtime_error("import: unsupported position unit '" + position_unit +
                                     "' (expected m, cm, or mm).");
        if (skip_lines < 0)
            throw std::runtime_error("import: skip_lines must be >= 0.");
    }

    double position_divisor() const {
        if (position_unit == "cm")
            return 100.0;
        if (position_unit == "mm")
            return 1000.0;
        return 1.0;
    }
};

struct ImportResult {
    SoundingDataset dataset;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string_view> split_on(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace detail

// Reads an external line-oriented capture log through a declared column
// mapping and normalizes it into a SoundingDataset: rows are sorted by
// (ue_id, trial, ap_index), duplicates rejected, and ap_index renumbered to
// the contiguous 0-based schedule the analyses expect.
inline ImportResult import_external(std::istream& in, const ImportMapping& mapping) {
    mapping.validate();
    ImportResult result;
    result.dataset.meta = mapping.meta;
    result.dataset.meta.f_points = mapping.f_points;

    const auto f_points = static_cast<std::size_t>(mapping.f_points);
    std::size_t min_fields = static_cast<std::size_t>(mapping.samples_start) + 2 * f_points;
    for (int column : {mapping.ue_id, mapping.trial, mapping.ap_index, mapping.x_m,
                       mapping.y_m, mapping.z_m})
        min_fields = std::max(min_fields, static_cast<std::size_t>(column + 1));
    const double divisor = mapping.position_divisor();

    std::string line;
    std::size_t line_no = 0;
    for (int i = 0; i < mapping.skip_lines; ++i) {
        if (!std::getline(in, line))
            throw ParseError(line_no + 1, "file ends inside the skipped header block.");
        ++line_no;
    }

    struct Row {
        ChannelRecord record;
        std::size_t line;
    };
    std::vector<Row> rows;
    bool trial_defaulted = false;
    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_carriage_return(line);
        if (line.empty())
            throw ParseError(line_no, "empty line.");
        const auto fields = detail::split_on(line, mapping.delimiter);
        if (fields.size() < min_fields)
            throw ParseError(line_no, "expected at least " + std::to_string(min_fields) +
                                          " fields, got " + std::to_string(fields.size()) +
                                          ".");
        ChannelRecord record;
        record.ue_id = detail::parse_int_field(fields[static_cast<std::size_t>(mapping.ue_id)],
                                               line_no,
                                               static_cast<std::size_t>(mapping.ue_id) + 1);
        if (mapping.trial >= 0) {
            record.trial = detail::parse_int_field(
                fields[static_cast<std::size_t>(mapping.trial)], line_no,
                static_cast<std::size_t>(mapping.trial) + 1);
        } else {
            record.trial = 1;
            trial_defaulted = true;
        }
        record.ap_index = detail::parse_int_field(
            fields[static_cast<std::size_t>(mapping.ap_index)], line_no,
            static_cast<std::size_t>(mapping.ap_index) + 1);
        const auto position = [&](int column) {
            return detail::parse_double_field(fields[static_cast<std::size_t>(column)],
                                              line_no,
                                              static_cast<std::size_t>(column) + 1) /
                   divisor;
        };
        record.ap_position = {position(mapping.x_m), position(mapping.y_m),
                              position(mapping.z_m)};
        record.samples.resize(f_points);
        for (std::size_t i = 0; i < f_points; ++i) {
            const auto col = static_cast<std::size_t>(mapping.samples_start) + 2 * i;
            record.samples[i] = {
                detail::parse_double_field(fields[col], line_no, col + 1),
                detail::parse_double_field(fields[col + 1], line_no, col + 2)};
        }
        try {
            validate_record(record);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
        rows.push_back({std::move(record), line_no});
    }
    if (in.bad())
        throw std::runtime_error("import: stream failure while reading.");

    if (trial_defaulted)
        result.warnings.push_back("trial column not mapped; defaulted all records to trial 1.");

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.record.ue_id != b.record.ue_id)
            return a.record.ue_id < b.record.ue_id;
        if (a.record.trial != b.record.trial)
            return a.record.trial < b.record.trial;
        return a.record.ap_index < b.record.ap_index;
    });
    bool reindexed = false;
    int next_ap = 0;
    int prev_original_ap = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const bool new_group = i == 0 ||
                               rows[i].record.ue_id != rows[i - 1].record.ue_id ||
                               rows[i].record.trial != rows[i - 1].record.trial;
        if (new_group)
            next_ap = 0;
        else if (rows[i].record.ap_index == prev_original_ap)
            throw ParseError(rows[i].line,
                             "duplicate record for ue_id " +
                                 std::to_string(rows[i].record.ue_id) + ", trial " +
                                 std::to_string(rows[i].record.trial) + ", ap_index " +
                                 std::to_string(rows[i].record.ap_index) + ".");
        prev_original_ap = rows[i].record.ap_index;
        if (rows[i].record.ap_index != next_ap) {
            rows[i].record.ap_index = next_ap;
            reindexed = true;
        }
        ++next_ap;
    }
    if (reindexed)
        result.warnings.push_back("ap_index renumbered to a contiguous 0-based schedule.");

    result.dataset.records.reserve(rows.size());
    for (auto& row : rows)
        result.dataset.records.push_back(std::move(row.record));
    result.dataset.validate();
    return result;
}

inline ImportResult import_external(const std::string& path, const ImportMapping& mapping) {
    auto in = detail::open_input(path);
    return import_external(in, mapping);
}

// Mapping spec as a JSON document:
// {
//   "columns": {"ue_id": 0, "trial": 1, "ap_index": 2, "x_m": 3, "y_m": 4,
//               "z_m": 5, "samples_start": 6},
//   "f_points": 64, "position_unit": "m", "delimiter": ",", "skip_lines": 1,
//   "meta": {"carrier_hz": ..., "bandwidth_hz": ..., "speed_mps": ...,
//            "capture_interval_s": ..., "altitude_m": ..., "environment_seed": ...}
// }
inline ImportMapping load_import_mapping(const nlohmann::json& root) {
    if (!root.is_object())
        throw std::runtime_error("import: mapping spec must be a JSON object.");
    ImportMapping mapping;
    for (const auto& item : root.items()) {
        const std::string& key = item.key();
        if (key != "columns" && key != "f_points" && key != "position_unit" &&
            key != "delimiter" && key != "skip_lines" && key != "meta")
            throw std::runtime_error("import: unknown mapping key '" + key + "'.");
    }
    if (!root.contains("columns") || !root["columns"].is_object())
        throw std::runtime_error("import: mapping spec needs a 'columns' object.");
    for (const auto& item : root["columns"].items()) {
        if (!item.value().is_number_integer())
            throw std::runtime_error("import: column index for '" + item.key() +
                                     "' must be an integer.");
        const int column = item.value().get<int>();
        if (item.key() == "ue_id")
            mapping.ue_id = column;
        else if (item.key() == "trial")
            mapping.trial = column;
        else if (item.key() == "ap_index")
            mapping.ap_index = column;
        else if (item.key() == "x_m")
            mapping.x_m = column;
        else if (item.key() == "y_m")
            mapping.y_m = column;
        else if (item.key() == "z_m")
            mapping.z_m = column;
        else if (item.key() == "samples_start")
            mapping.samples_start = column;
        else
            throw std::runtime_error("import: unknown column mapping '" + item.key() +
                                     "'.");
    }
    if (!root.contains("f_points") || !root["f_points"].is_number_integer())
        throw std::runtime_error("import: mapping spec needs integer 'f_points'.");
    mapping.f_points = root["f_points"].get<int>();
    if (root.contains("position_unit")) {
        if (!root["position_unit"].is_string())
            throw std::runtime_error("import: 'position_unit' must be a string.");
        mapping.position_unit = root["position_unit"].get<std::string>();
    }
    if (root.contains("delimiter")) {
        if (!root["delimiter"].is_string() || root["delimiter"].get<std::string>().size() != 1)
            throw std::runtime_error("import: 'delimiter' must be a single character.");
        mapping.delimiter = root["delimiter"].get<std::string>()[0];
    }
    if (root.contains("skip_lines")) {
        if (!root["skip_lines"].is_number_integer())
            throw std::runtime_error("import: 'skip_lines' must be an integer.");
        mapping.skip_lines = root["skip_lines"].get<int>();
    }
    if (root.contains("meta")) {
        const auto& meta = root["meta"];
        if (!meta.is_object())
            throw std::runtime_error("import: 'meta' must be an object.");
        const auto read_meta_double = [&](const char* key, double& out) {
            if (!meta.contains(key))
                return;
            if (!meta[key].is_number())
                throw std::runtime_error(std::string("import: meta '") + key +
                                         "' must be a number.");
            out = meta[key].get<double>();
        };
        for (const auto& item : meta.items()) {
            const std::string& key = item.key();
            if (key != "carrier_hz" && key != "bandwidth_hz" && key != "speed_mps" &&
                key != "capture_interval_s" && key != "altitude_m" &&
                key != "environment_seed")
                throw std::runtime_error("import: unknown meta key '" + key + "'.");
        }
        read_meta_double("carrier_hz", mapping.meta.carrier_hz);
        read_meta_double("bandwidth_hz", mapping.meta.bandwidth_hz);
        read_meta_double("speed_mps", mapping.meta.speed_mps);
        read_meta_double("capture_interval_s", mapping.meta.capture_interval_s);
        read_meta_double("altitude_m", mapping.meta.altitude_m);
        if (meta.contains("environment_seed")) {
            if (!meta["environment_seed"].is_number_unsigned())
                throw std::runtime_error(
                    "import: meta 'environment_seed' must be a nonnegative integer.");
            mapping.meta.environment_seed = meta["environment_seed"].get<std::uint64_t>();
        }
    }
    mapping.validate();
    return mapping;
}

inline ImportMapping load_import_mapping_file(const std::string& path) {
    auto in = detail::open_input(path);
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("import: " + path + " is not valid JSON: " + e.what());
    }
    return load_import_mapping(root);
}

} // namespace cfsound
