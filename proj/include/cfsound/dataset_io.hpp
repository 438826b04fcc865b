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

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfsound/analysis.hpp"
#include "cfsound/channel_metrics.hpp"
#include "cfsound/records.hpp"

namespace cfsound {

inline constexpr int kDatasetFormatVersion = 1;

// Parse failure tied to a 1-based line of the input file.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

// 17 significant digits round-trip every finite binary64 value exactly.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline double parse_double_field(std::string_view text, std::size_t line_no,
                                 std::size_t field_no) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError(line_no, "field " + std::to_string(field_no) +
                                      ": not a number: '" + std::string(text) + "'");
    if (!std::isfinite(v))
        throw ParseError(line_no,
                         "field " + std::to_string(field_no) + ": non-finite value.");
    return v;
}

inline int parse_int_field(std::string_view text, std::size_t line_no,
                           std::size_t field_no) {
    int v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError(line_no, "field " + std::to_string(field_no) +
                                      ": not an integer: '" + std::string(text) + "'");
    return v;
}

inline void strip_carriage_return(std::string& line) {
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    return out;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file for reading: " + path);
    return in;
}

} // namespace detail

// ---- native dataset format ------------------------------------------------
//
// Line 1: a JSON object with the dataset metadata (format_version gates the
// parser). Every following line is one record:
// ue_id,trial,ap_index,x_m,y_m,z_m,re_0,im_0,...,re_{F-1},im_{F-1}

inline void write_dataset(const SoundingDataset& dataset, std::ostream& out) {
    dataset.validate();
    const nlohmann::json header = {
        {"format_version", kDatasetFormatVersion},
        {"carrier_hz", dataset.meta.carrier_hz},
        {"bandwidth_hz", dataset.meta.bandwidth_hz},
        {"f_points", dataset.meta.f_points},
        {"speed_mps", dataset.meta.speed_mps},
        {"capture_interval_s", dataset.meta.capture_interval_s},
        {"altitude_m", dataset.meta.altitude_m},
        {"environment_seed", dataset.meta.environment_seed},
    };
    out << header.dump() << '\n';
    std::string line;
    for (const auto& r : dataset.records) {
        line.clear();
        line += std::to_string(r.ue_id);
        line += ',';
        line += std::to_string(r.trial);
        line += ',';
        line += std::to_string(r.ap_index);
        line += ',';
        line += format_double(r.ap_position.x);
        line += ',';
        line += format_double(r.ap_position.y);
        line += ',';
        line += format_double(r.ap_position.z);
        for (const auto& s : r.samples) {
            line += ',';
            line += format_double(s.real());
            line += ',';
            line += format_double(s.imag());
        }
        line += '\n';
        out << line;
    }
    if (!out)
        throw std::runtime_error("write_dataset: stream failure while writing.");
}

inline void write_dataset(const SoundingDataset& dataset, const std::string& path) {
    auto out = detail::open_output(path);
    write_dataset(dataset, out);
}

namespace detail {

inline DatasetMeta parse_dataset_header(const std::string& line) {
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("malformed header: ") + e.what());
    }
    if (!header.is_object())
        throw ParseError(1, "malformed header: expected a JSON object.");
    if (!header.contains("format_version") ||
        !header["format_version"].is_number_integer())
        throw ParseError(1, "malformed header: missing integer 'format_version'.");
    if (header["format_version"].get<int>() != kDatasetFormatVersion)
        throw ParseError(1, "unsupported format_version " +
                                header["format_version"].dump() + " (expected " +
                                std::to_string(kDatasetFormatVersion) + ").");

    DatasetMeta meta;
    const auto require_number = [&](const char* key) -> double {
        if (!header.contains(key) || !header[key].is_number())
            throw ParseError(1, std::string("malformed header: missing numeric '") + key +
                                    "'.");
        return header[key].get<double>();
    };
    meta.carrier_hz = require_number("carrier_hz");
    meta.bandwidth_hz = require_number("bandwidth_hz");
    meta.speed_mps = require_number("speed_mps");
    meta.capture_interval_s = require_number("capture_interval_s");
    meta.altitude_m = require_number("altitude_m");
    if (!header.contains("f_points") || !header["f_points"].is_number_integer() ||
        header["f_points"].get<int>() < 1)
        throw ParseError(1, "malformed header: 'f_points' must be a positive integer.");
    meta.f_points = header["f_points"].get<int>();
    if (!header.contains("environment_seed") ||
        !header["environment_seed"].is_number_unsigned())
        throw ParseError(1,
                         "malformed header: 'environment_seed' must be a nonnegative "
                         "integer.");
    meta.environment_seed = header["environment_seed"].get<std::uint64_t>();

    static constexpr const char* kKnown[] = {
        "format_version", "carrier_hz",         "bandwidth_hz", "f_points",
        "speed_mps",      "capture_interval_s", "altitude_m",   "environment_seed"};
    for (const auto& item : header.items()) {
        bool known = false;
        for (const char* k : kKnown)
            known = known || item.key() == k;
        if (!known)
            throw ParseError(1, "malformed header: unknown field '" + item.key() + "'.");
    }
    return meta;
}

} // namespace detail

inline SoundingDataset read_dataset(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(1, "missing header line.");
    detail::strip_carriage_return(line);
    SoundingDataset dataset;
    dataset.meta = detail::parse_dataset_header(line);
    const auto f_points = static_cast<std::size_t>(dataset.meta.f_points);
    const std::size_t expected_fields = 6 + 2 * f_points;

    // Structural bookkeeping: (ue, trial) groups must be contiguous and
    // ap_index must follow the capture schedule 0..L-1 within each group.
    std::vector<std::pair<int, int>> seen_groups;
    int group_ue = 0;
    int group_trial = 0;
    int expected_ap = 0;
    bool in_group = false;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_carriage_return(line);
        if (line.empty())
            throw ParseError(line_no, "empty line.");
        const auto fields = detail::split_fields(line);
        if (fields.size() != expected_fields)
            throw ParseError(line_no, "expected " + std::to_string(expected_fields) +
                                          " fields (6 + 2*F), got " +
                                          std::to_string(fields.size()) + ".");
        ChannelRecord record;
        record.ue_id = detail::parse_int_field(fields[0], line_no, 1);
        record.trial = detail::parse_int_field(fields[1], line_no, 2);
        record.ap_index = detail::parse_int_field(fields[2], line_no, 3);
        record.ap_position.x = detail::parse_double_field(fields[3], line_no, 4);
        record.ap_position.y = detail::parse_double_field(fields[4], line_no, 5);
        record.ap_position.z = detail::parse_double_field(fields[5], line_no, 6);
        record.samples.resize(f_points);
        for (std::size_t i = 0; i < f_points; ++i) {
            const double re =
                detail::parse_double_field(fields[6 + 2 * i], line_no, 7 + 2 * i);
            const double im =
                detail::parse_double_field(fields[7 + 2 * i], line_no, 8 + 2 * i);
            record.samples[i] = {re, im};
        }
        try {
            validate_record(record);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }

        if (!in_group || record.ue_id != group_ue || record.trial != group_trial) {
            for (const auto& g : seen_groups)
                if (g.first == record.ue_id && g.second == record.trial)
                    throw ParseError(line_no, "records for ue_id " +
                                                  std::to_string(record.ue_id) +
                                                  ", trial " +
                                                  std::to_string(record.trial) +
                                                  " are not contiguous.");
            seen_groups.emplace_back(record.ue_id, record.trial);
            group_ue = record.ue_id;
            group_trial = record.trial;
            expected_ap = 0;
            in_group = true;
        }
        if (record.ap_index != expected_ap)
            throw ParseError(line_no, "ap_index " + std::to_string(record.ap_index) +
                                          " out of order (expected " +
                                          std::to_string(expected_ap) + ").");
        ++expected_ap;
        dataset.records.push_back(std::move(record));
    }
    if (in.bad())
        throw std::runtime_error("read_dataset: stream failure while reading.");
    dataset.validate();
    return dataset;
}

inline SoundingDataset read_dataset(const std::string& path) {
    auto in = detail::open_input(path);
    return read_dataset(in);
}

// ---- CSV reports -----------------------------------------------------------
//
// Fixed schemas, fixed column order, '\n' line endings, 17-significant-digit
// floats; outputs are byte-stable for identical inputs.

namespace detail {

inline std::string percentile_columns() {
    std::string cols;
    for (double q : kReportPercentiles)
        cols += ",p" + std::to_string(static_cast<int>(q)) + "_db";
    return cols;
}

inline void append_summary_fields(std::string& row, const SummaryStats& s) {
    row += ',' + format_double(summary_percentile(s, 50.0));
    row += ',' + format_double(s.std_dev);
    row += ',' + format_double(s.mean);
    row += ',' + format_double(s.min);
    row += ',' + format_double(s.max);
    for (double v : s.percentile_value)
        row += ',' + format_double(v);
}

} // namespace detail

inline void write_gain_map_csv(const SoundingDataset& dataset, int ue_id, int trial,
                               std::ostream& out) {
    const auto records = dataset.records_for(ue_id, trial);
    if (records.empty())
        throw std::invalid_argument("write_gain_map_csv: no records for requested flight.");
    out << "ap_index,x_m,y_m,z_m,ue_id,gain_db\n";
    for (const auto& r : records) {
        std::string row = std::to_string(r.ap_index);
        row += ',' + format_double(r.ap_position.x);
        row += ',' + format_double(r.ap_position.y);
        row += ',' + format_double(r.ap_position.z);
        row += ',' + std::to_string(r.ue_id);
        row += ',' + format_double(gain_db(r));
        row += '\n';
        out << row;
    }
}

inline void write_snr_sweep_csv(const SnrSweepResult& result, std::ostream& out) {
    out << "ue_id,ap_count,median_db,std_db,mean_db,min_db,max_db"
        << detail::percentile_columns() << '\n';
    for (std::size_t u = 0; u < result.ue_ids.size(); ++u) {
        for (std::size_t c = 0; c < result.ap_counts.size(); ++c) {
            std::string row = std::to_string(result.ue_ids[u]);
            row += ',' + std::to_string(result.ap_counts[c]);
            detail::append_summary_fields(row, result.snr_db[u][c]);
            row += '\n';
            out << row;
        }
    }
}

inline void write_sinr_eval_csv(const SinrEvalResult& result, std::ostream& out) {
    out << "ue_id,ap_count,method,median_db,std_db,mean_db,min_db,max_db"
        << detail::percentile_columns() << '\n';
    for (std::size_t u = 0; u < result.ue_ids.size(); ++u) {
        for (std::size_t c = 0; c < result.ap_counts.size(); ++c) {
            for (std::size_t method = 0; method < SinrEvalResult::kMethods.size();
                 ++method) {
                std::string row = std::to_string(result.ue_ids[u]);
                row += ',' + std::to_string(result.ap_counts[c]);
                row += ',';
                row += combining_method_name(SinrEvalResult::kMethods[method]);
                detail::append_summary_fields(row, result.summary_db[method][u][c]);
                row += '\n';
                out << row;
            }
        }
    }
}

inline void write_sinr_cdf_csv(const SinrEvalResult& result, std::ostream& out) {
    out << "ue_id,ap_count,method,sinr_db,probability\n";
    for (std::size_t u = 0; u < result.ue_ids.size(); ++u) {
        for (std::size_t c = 0; c < result.ap_counts.size(); ++c) {
            for (std::size_t method = 0; method < SinrEvalResult::kMethods.size();
                 ++method) {
                const CdfCurve& cdf = result.cdf_db[method][u][c];
                for (std::size_t i = 0; i < cdf.value.size(); ++i) {
                    std::string row = std::to_string(result.ue_ids[u]);
                    row += ',' + std::to_string(result.ap_counts[c]);
                    row += ',';
                    row += combining_method_name(SinrEvalResult::kMethods[method]);
                    row += ',' + format_double(cdf.value[i]);
                    row += ',' + format_double(cdf.probability[i]);
                    row += '\n';
                    out << row;
                }
            }
        }
    }
}

inline void write_repro_csv(std::span<const std::pair<int, double>> rows,
                            std::ostream& out) {
    out << "ue_id,rms_error_db\n";
    for (const auto& [ue, rms] : rows)
        out << std::to_string(ue) << ',' << format_double(rms) << '\n';
}

} // namespace cfsound
