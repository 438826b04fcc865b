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
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cfsound/dataset_io.hpp>
#include <cfsound/import.hpp>

using namespace cfsound;
using cdouble = std::complex<double>;

namespace {

SoundingDataset tiny_dataset() {
    SoundingDataset ds;
    ds.meta.f_points = 2;
    ds.meta.carrier_hz = 3.5e9;
    ds.meta.environment_seed = 42;
    const auto add = [&](int ue, int trial, int ap, double x, cdouble a, cdouble b) {
        ChannelRecord r;
        r.ue_id = ue;
        r.trial = trial;
        r.ap_index = ap;
        r.ap_position = {x, 0.1 * x, 35.0};
        r.samples = {a, b};
        ds.records.push_back(std::move(r));
    };
    add(1, 1, 0, 0.0, {1.0, -0.5}, {0.1, 0.2});
    add(1, 1, 1, 0.2, {1.0 / 3.0, 2.0e-8}, {-4.25, 1e-300});
    add(1, 2, 0, 0.0, {0.5, 0.5}, {0.25, -0.125});
    add(1, 2, 1, 0.2, {-0.75, 0.0}, {0.0, 0.0});
    add(2, 1, 0, 0.0, {2.0, 1.0}, {-1.0, -2.0});
    add(2, 1, 1, 0.2, {0.125, 0.0625}, {3.5, -3.5});
    ds.validate();
    return ds;
}

std::string serialize(const SoundingDataset& ds) {
    std::ostringstream out;
    write_dataset(ds, out);
    return out.str();
}

// Runs a parse expecting failure; returns the reported 1-based line.
std::size_t failing_line(const std::string& text) {
    std::istringstream in(text);
    try {
        read_dataset(in);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0; // no error raised
}

} // namespace

TEST_CASE("dataset write/read round trip is exact", "[io]") {
    const SoundingDataset ds = tiny_dataset();
    const std::string text = serialize(ds);
    std::istringstream in(text);
    const SoundingDataset back = read_dataset(in);
    CHECK(back == ds);
    // Serialization is byte-stable.
    CHECK(serialize(back) == text);
}

TEST_CASE("dataset header is a single json object line", "[io]") {
    const std::string text = serialize(tiny_dataset());
    const std::string header_line = text.substr(0, text.find('\n'));
    const nlohmann::json header = nlohmann::json::parse(header_line);
    CHECK(header["format_version"] == 1);
    CHECK(header["f_points"] == 2);
    CHECK(header["carrier_hz"] == 3.5e9);
    CHECK(header["environment_seed"] == 42);
    CHECK(header.size() == 8);
    // Body: one line per record, 6 + 2F comma-separated fields.
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(std::count(line.begin(), line.end(), ',') == 6 + 2 * 2 - 1);
}

TEST_CASE("floats survive the 17-digit round trip bit-exactly", "[io]") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 1e-300, -0.0, 0.2,
                     123456789.123456789, -2.2250738585072014e-308}) {
        const std::string text = format_double(v);
        double parsed = 0.0;
        const auto res =
            std::from_chars(text.data(), text.data() + text.size(), parsed);
        REQUIRE(res.ec == std::errc());
        CHECK(std::signbit(parsed) == std::signbit(v));
        CHECK(parsed == v);
    }
}

TEST_CASE("empty dataset writes a header-only file", "[io]") {
    SoundingDataset empty;
    empty.meta.f_points = 8;
    const std::string text = serialize(empty);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    std::istringstream in(text);
    const SoundingDataset back = read_dataset(in);
    CHECK(back.records.empty());
    CHECK(back.meta == empty.meta);
}

TEST_CASE("carriage returns are tolerated", "[io]") {
    const SoundingDataset ds = tiny_dataset();
    std::string text = serialize(ds);
    std::string crlf;
    for (char c : text) {
        if (c == '\n')
            crlf += '\r';
        crlf += c;
    }
    std::istringstream in(crlf);
    CHECK(read_dataset(in) == ds);
}

TEST_CASE("header failures are reported on line 1", "[io]") {
    CHECK(failing_line("") == 1);
    CHECK(failing_line("not json\n") == 1);
    CHECK(failing_line("[1,2,3]\n") == 1);

    nlohmann::json header = nlohmann::json::parse(
        serialize(tiny_dataset()).substr(0, serialize(tiny_dataset()).find('\n')));
    nlohmann::json wrong_version = header;
    wrong_version["format_version"] = 2;
    CHECK(failing_line(wrong_version.dump() + "\n") == 1);
    nlohmann::json unknown = header;
    unknown["surprise"] = 1;
    CHECK(failing_line(unknown.dump() + "\n") == 1);
    nlohmann::json missing = header;
    missing.erase("carrier_hz");
    CHECK(failing_line(missing.dump() + "\n") == 1);
    nlohmann::json bad_f = header;
    bad_f["f_points"] = 0;
    CHECK(failing_line(bad_f.dump() + "\n") == 1);
    nlohmann::json bad_seed = header;
    bad_seed["environment_seed"] = -3;
    CHECK(failing_line(bad_seed.dump() + "\n") == 1);

    std::istringstream in(wrong_version.dump() + "\n");
    CHECK_THROWS_WITH(read_dataset(in),
                      Catch::Matchers::ContainsSubstring("unsupported format_version"));
}

TEST_CASE("body failures carry the offending line number", "[io]") {
    const std::string good = serialize(tiny_dataset());
    std::vector<std::string> lines;
    std::istringstream split(good);
    for (std::string l; std::getline(split, l);)
        lines.push_back(l);
    REQUIRE(lines.size() == 7); // header + 6 records

    const auto rebuild = [&](std::size_t index, const std::string& replacement) {
        std::string text;
        for (std::size_t i = 0; i < lines.size(); ++i)
            text += (i == index ? replacement : lines[i]) + "\n";
        return text;
    };

    // Wrong field count (record line 3 of the file).
    CHECK(failing_line(rebuild(2, "1,1,1,0.2,0")) == 3);
    // Non-numeric coordinate.
    CHECK(failing_line(rebuild(3, "1,2,0,zero,0,35,1,0,0,0")) == 4);
    // Non-finite sample.
    CHECK(failing_line(rebuild(3, "1,2,0,0,0,35,inf,0,0,0")) == 4);
    // Invalid trial stamp (validate_record failure).
    CHECK(failing_line(rebuild(3, "1,0,0,0,0,35,1,0,0,0")) == 4);
    // ap_index out of order.
    CHECK(failing_line(rebuild(2, "1,1,5,0.2,0.02,35,1,0,0,0")) == 3);
    // Empty body line.
    CHECK(failing_line(rebuild(4, "")) == 5);
    // Group split: ue 1 trial 1 reappears after ue 1 trial 2 started.
    {
        std::string text;
        const std::vector<std::size_t> order = {0, 1, 2, 3, 2, 4, 5, 6};
        // line 1 header, then records: (1,1)x2, (1,2) first, repeat of a (1,1) record...
        text = lines[0] + "\n" + lines[1] + "\n" + lines[2] + "\n" + lines[3] + "\n" +
               lines[1] + "\n";
        CHECK(failing_line(text) == 5);
        (void)order;
    }

    // The error text names the field for numeric failures.
    std::istringstream in(rebuild(3, "1,2,0,zero,0,35,1,0,0,0"));
    CHECK_THROWS_WITH(read_dataset(in),
                      Catch::Matchers::ContainsSubstring("field 4"));
}

TEST_CASE("gain map csv lists one row per capture", "[io]") {
    const SoundingDataset ds = tiny_dataset();
    std::ostringstream out;
    write_gain_map_csv(ds, 1, 2, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "ap_index,x_m,y_m,z_m,ue_id,gain_db");
    std::getline(in, line);
    const auto fields = detail::split_fields(line);
    REQUIRE(fields.size() == 6);
    CHECK(fields[0] == "0");
    CHECK(fields[4] == "1");
    // Record (1,2,0): samples {0.5+0.5i, 0.25-0.125i} -> mean power of 0.5, 0.078125.
    const double expected = 10.0 * std::log10((0.5 + 0.078125) / 2.0);
    CHECK(std::stod(std::string(fields[5])) == Catch::Approx(expected).margin(1e-12));
    std::getline(in, line);
    CHECK_FALSE(line.empty());
    CHECK_FALSE(std::getline(in, line)); // exactly 2 records for (ue 1, trial 2)
    CHECK_THROWS_AS(write_gain_map_csv(ds, 9, 1, out), std::invalid_argument);
}

TEST_CASE("snr sweep csv has the documented schema", "[io]") {
    SnrSweepResult result;
    result.ap_counts = {2, 4};
    result.ue_ids = {1, 3};
    std::vector<double> samples = {10.0, 12.0, 14.0, 16.0};
    result.snr_db = {{summarize(samples), summarize(samples)},
                     {summarize(samples), summarize(samples)}};
    std::ostringstream out;
    write_snr_sweep_csv(result, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line ==
          "ue_id,ap_count,median_db,std_db,mean_db,min_db,max_db,"
          "p1_db,p5_db,p10_db,p25_db,p50_db,p75_db,p90_db,p95_db,p99_db");
    int rows = 0;
    std::vector<std::string> first_fields;
    while (std::getline(in, line)) {
        ++rows;
        if (rows == 1) {
            for (auto f : detail::split_fields(line))
                first_fields.emplace_back(f);
        }
    }
    CHECK(rows == 4);
    REQUIRE(first_fields.size() == 16);
    CHECK(first_fields[0] == "1");
    CHECK(first_fields[1] == "2");
    CHECK(std::stod(first_fields[2]) == 13.0); // median
    CHECK(std::stod(first_fields[4]) == 13.0); // mean
    CHECK(std::stod(first_fields[5]) == 10.0); // min
    CHECK(std::stod(first_fields[6]) == 16.0); // max

    // Byte-stable output.
    std::ostringstream again;
    write_snr_sweep_csv(result, again);
    CHECK(again.str() == out.str());
}

TEST_CASE("sinr eval and cdf csvs cover both methods", "[io]") {
    SinrEvalResult result;
    result.ap_counts = {8};
    result.ue_ids = {1, 2};
    const std::vector<double> opt = {20.0, 21.0, 22.0, 23.0};
    const std::vector<double> mr = {18.0, 18.5, 19.0, 19.5};
    result.samples_db = {{{opt}, {opt}}, {{mr}, {mr}}};
    result.summary_db = {{{summarize(opt)}, {summarize(opt)}},
                         {{summarize(mr)}, {summarize(mr)}}};
    result.cdf_db = {{{empirical_cdf(opt, 5)}, {empirical_cdf(opt, 5)}},
                     {{empirical_cdf(mr, 5)}, {empirical_cdf(mr, 5)}}};

    std::ostringstream out;
    write_sinr_eval_csv(result, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line ==
          "ue_id,ap_count,method,median_db,std_db,mean_db,min_db,max_db,"
          "p1_db,p5_db,p10_db,p25_db,p50_db,p75_db,p90_db,p95_db,p99_db");
    std::vector<std::string> rows;
    while (std::getline(in, line))
        rows.push_back(line);
    REQUIRE(rows.size() == 4); // 2 ues x 1 count x 2 methods
    CHECK(rows[0].find(",optimum,") != std::string::npos);
    CHECK(rows[1].find(",mr,") != std::string::npos);
    CHECK(rows[0].substr(0, 4) == "1,8,");

    std::ostringstream cdf_out;
    write_sinr_cdf_csv(result, cdf_out);
    std::istringstream cdf_in(cdf_out.str());
    std::getline(cdf_in, line);
    CHECK(line == "ue_id,ap_count,method,sinr_db,probability");
    int cdf_rows = 0;
    int optimum_rows = 0;
    while (std::getline(cdf_in, line)) {
        ++cdf_rows;
        if (line.find(",optimum,") != std::string::npos)
            ++optimum_rows;
    }
    CHECK(cdf_rows == 2 * 1 * 2 * 5);
    CHECK(optimum_rows == 2 * 1 * 5);
}

TEST_CASE("repro csv lists one row per ue", "[io]") {
    const std::vector<std::pair<int, double>> rows = {{1, 2.5}, {2, 2.75}};
    std::ostringstream out;
    write_repro_csv(rows, out);
    CHECK(out.str() == "ue_id,rms_error_db\n1,2.5\n2,2.75\n");
}

TEST_CASE("import normalizes a scrambled external log", "[io]") {
    // Columns: label, ap, x_cm, y_cm, z_cm, ue, re0, im0, re1, im1.
    // Rows deliberately unordered, ap numbering starting at 10 with stride 10.
    const std::string text =
        "# capture log\n"
        "v2 export\n"
        "a,30,100,200,3500,1,0.5,0.5,0.25,-0.125\n"
        "b,10,0,0,3500,1,1,-0.5,0.1,0.2\n"
        "c,10,0,0,3500,2,2,1,-1,-2\n"
        "d,20,20,4,3500,1,0.333,2e-8,-4.25,0\n"
        "e,20,20,4,3500,2,0.125,0.0625,3.5,-3.5\n";
    ImportMapping mapping;
    mapping.ue_id = 5;
    mapping.ap_index = 1;
    mapping.x_m = 2;
    mapping.y_m = 3;
    mapping.z_m = 4;
    mapping.samples_start = 6;
    mapping.f_points = 2;
    mapping.position_unit = "cm";
    mapping.skip_lines = 2;
    mapping.meta.f_points = 2;

    std::istringstream in(text);
    const ImportResult result = import_external(in, mapping);
    REQUIRE(result.warnings.size() == 2);
    CHECK(result.warnings[0] ==
          "trial column not mapped; defaulted all records to trial 1.");
    CHECK(result.warnings[1] == "ap_index renumbered to a contiguous 0-based schedule.");

    const SoundingDataset& ds = result.dataset;
    REQUIRE(ds.records.size() == 5);
    ds.validate();
    CHECK(ds.ue_ids() == std::vector<int>{1, 2});
    const auto ue1 = ds.records_for(1, 1);
    REQUIRE(ue1.size() == 3);
    CHECK(ue1[0].ap_index == 0);
    CHECK(ue1[0].ap_position.x == 0.0);
    CHECK(ue1[1].ap_index == 1);
    CHECK(ue1[1].ap_position.x == 0.2); // 20 cm -> 0.2 m, exact division
    CHECK(ue1[1].ap_position.y == 0.04);
    CHECK(ue1[2].ap_index == 2);
    CHECK(ue1[2].ap_position.z == 35.0);
    CHECK(ue1[1].samples[0] == cdouble{0.333, 2e-8});
    const auto ue2 = ds.records_for(2, 1);
    REQUIRE(ue2.size() == 2);
    CHECK(ue2[1].samples[1] == cdouble{3.5, -3.5});
}

TEST_CASE("import rejects duplicates and malformed rows", "[io]") {
    ImportMapping mapping;
    mapping.ue_id = 0;
    mapping.trial = 1;
    mapping.ap_index = 2;
    mapping.x_m = 3;
    mapping.y_m = 4;
    mapping.z_m = 5;
    mapping.samples_start = 6;
    mapping.f_points = 1;

    const auto import_line = [&](const std::string& body) {
        std::istringstream in(body);
        try {
            import_external(in, mapping);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };

    // Duplicate (ue, trial, ap): reported at the later of the two rows.
    CHECK(import_line("1,1,0,0,0,35,1,0\n"
                      "1,1,1,1,0,35,1,0\n"
                      "1,1,0,0,0,35,2,0\n") == 3);
    // Short row.
    CHECK(import_line("1,1,0,0,0,35,1\n") == 1);
    // Bad number.
    CHECK(import_line("1,1,0,x,0,35,1,0\n") == 1);
    // Bad trial stamp.
    CHECK(import_line("1,0,0,0,0,35,1,0\n") == 1);
    // Truncated header block.
    mapping.skip_lines = 3;
    CHECK(import_line("only one line\n") == 2);
    mapping.skip_lines = 0;

    ImportMapping incomplete;
    incomplete.f_points = 1;
    std::istringstream in("1,1,0,0,0,35,1,0\n");
    CHECK_THROWS_WITH(import_external(in, incomplete),
                      Catch::Matchers::ContainsSubstring("ue_id"));
}

TEST_CASE("import mapping loads from json and rejects unknown keys", "[io]") {
    const nlohmann::json spec = {
        {"columns",
         {{"ue_id", 0},
          {"trial", 1},
          {"ap_index", 2},
          {"x_m", 3},
          {"y_m", 4},
          {"z_m", 5},
          {"samples_start", 6}}},
        {"f_points", 4},
        {"position_unit", "mm"},
        {"delimiter", ";"},
        {"skip_lines", 1},
        {"meta", {{"carrier_hz", 2.4e9}, {"environment_seed", 7u}}},
    };
    const ImportMapping mapping = load_import_mapping(spec);
    CHECK(mapping.ue_id == 0);
    CHECK(mapping.trial == 1);
    CHECK(mapping.samples_start == 6);
    CHECK(mapping.f_points == 4);
    CHECK(mapping.position_divisor() == 1000.0);
    CHECK(mapping.delimiter == ';');
    CHECK(mapping.skip_lines == 1);
    CHECK(mapping.meta.carrier_hz == 2.4e9);
    CHECK(mapping.meta.environment_seed == 7);

    nlohmann::json bad = spec;
    bad["typo"] = 1;
    CHECK_THROWS_WITH(load_import_mapping(bad),
                      Catch::Matchers::ContainsSubstring("unknown mapping key"));
    bad = spec;
    bad["columns"]["bogus"] = 9;
    CHECK_THROWS_WITH(load_import_mapping(bad),
                      Catch::Matchers::ContainsSubstring("unknown column mapping"));
    bad = spec;
    bad.erase("f_points");
    CHECK_THROWS_AS(load_import_mapping(bad), std::runtime_error);
    bad = spec;
    bad["position_unit"] = "ft";
    CHECK_THROWS_WITH(load_import_mapping(bad),
                      Catch::Matchers::ContainsSubstring("unsupported position unit"));
    bad = spec;
    bad["delimiter"] = ";;";
    CHECK_THROWS_AS(load_import_mapping(bad), std::runtime_error);
    bad = spec;
    bad["meta"]["bogus"] = 1.0;
    CHECK_THROWS_WITH(load_import_mapping(bad),
                      Catch::Matchers::ContainsSubstring("unknown meta key"));
    CHECK_THROWS_AS(load_import_mapping(nlohmann::json::array()), std::runtime_error);
}
