#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "mparity/format.hpp"
#include "mparity/report.hpp"

using namespace mparity;

namespace {

pipeline::Summary sample_summary() {
    pipeline::Summary s;
    s.temperature_K = 4.8e-6;
    s.eta = 0.5;
    s.omega_rad_s = 628318.53071795858;
    s.x_zpf_m = 7.1e-27;
    s.parity_expectation = 1.0;
    s.acceptance_probability = 0.66946245394212361;
    s.d2_fraction_accepted = 0.0;
    s.d2_fraction_total = 0.17;
    s.thermal_levels = 23;
    s.mirror_dim = 43;
    s.max_norm_deficit = 3.2e-12;
    s.resolution_adequate = 1;
    return s;
}

detection::ClickStream sample_stream() {
    detection::ClickStream stream;
    stream.records.push_back({0, detection::Detector::d1, 0, true});
    stream.records.push_back({1, detection::Detector::d2, -3, false});
    stream.records.push_back({2, detection::Detector::d1, 2, true});
    stream.summary.n_events = 3;
    stream.summary.n_accepted = 2;
    stream.summary.d1_accepted = 2;
    stream.summary.d2_accepted = 0;
    stream.summary.d1_total = 2;
    stream.summary.d2_total = 1;
    stream.summary.d2_fraction_accepted = 0.0;
    stream.summary.d2_fraction_total = 1.0 / 3.0;
    stream.summary.acceptance_rate = 2.0 / 3.0;
    stream.summary.wilson_low = 0.0;
    stream.summary.wilson_high = 0.65761999385838759;
    return stream;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("round-trip double formatting") {
    for (const double v :
         {0.1, 1.0, -2.5, 1e-10, 1.0 / 3.0, 3.141592653589793, 6.62607015e-34,
          123456789.123456789, 1.7976931348623157e308, 4.9406564584124654e-324}) {
        const std::string cell = io::format_double(v);
        // strtod, not stod: stod throws out_of_range on the subnormal because
        // glibc flags the underflow with ERANGE even though the value is exact.
        CHECK(std::strtod(cell.c_str(), nullptr) == v);
    }
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_bool(true) == std::string("true"));
    CHECK(io::format_bool(false) == std::string("false"));
}

TEST_CASE("summary csv carries the fixed column set") {
    const auto text = report::summary_csv(sample_summary());
    const auto lines = split_lines(text);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "temperature_K,eta,omega_rad_s,x_zpf_m,parity_expectation,"
          "acceptance_probability,d2_fraction_accepted,d2_fraction_total,"
          "thermal_levels,mirror_dim,max_norm_deficit,resolution_adequate");

    std::istringstream row(lines[1]);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 12);
    CHECK(std::stod(cells[0]) == 4.8e-6);
    CHECK(std::stod(cells[1]) == 0.5);
    CHECK(std::stod(cells[4]) == 1.0);
    CHECK(std::stod(cells[5]) == 0.66946245394212361);
    CHECK(cells[8] == "23");
    CHECK(cells[9] == "43");
    CHECK(std::stod(cells[10]) == 3.2e-12);
    CHECK(cells[11] == "1");
}

TEST_CASE("sweep csv prepends the axis columns") {
    std::vector<pipeline::SweepRow> rows(2);
    rows[0].axis_value = 0.0;
    rows[0].summary = sample_summary();
    rows[1].axis_value = 4.8e-6;
    rows[1].summary = sample_summary();
    rows[1].summary.parity_expectation = 0.25;

    const auto text = report::sweep_csv(pipeline::SweepAxis::temperature, rows);
    const auto lines = split_lines(text);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].rfind("axis,axis_value,temperature_K,", 0) == 0);
    CHECK(lines[1].rfind("temperature,0,", 0) == 0);
    CHECK(lines[2].rfind("temperature,4.7999999999999998e-06,", 0) == 0);

    const auto eta_text = report::sweep_csv(pipeline::SweepAxis::eta, rows);
    CHECK(split_lines(eta_text)[1].rfind("eta,", 0) == 0);
}

TEST_CASE("clicks csv writes one record per line") {
    const auto text = report::clicks_csv(sample_stream());
    const auto lines = split_lines(text);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "trajectory_id,detector,shift_j,accepted");
    CHECK(lines[1] == "0,D1,0,1");
    CHECK(lines[2] == "1,D2,-3,0");
    CHECK(lines[3] == "2,D1,2,1");
}

TEST_CASE("feasibility csv lists grid points then solved targets") {
    feasibility::FeasibilityPoint p;
    p.n_nucleons = 1000000;
    p.lambda_m = 1e-10;
    p.eta = 0.5;
    p.omega_rad_s = 2e9;
    p.resolution_ratio = 1e-7;

    report::SolvedFeasibilityRow solved;
    solved.n_nucleons = 1057127883.6637449;
    solved.lambda_m = 1e-10;
    solved.eta = 0.5;
    solved.omega_rad_s = 1883651.5673088534;
    solved.resolution_ratio = 1e-13;

    const auto text = report::feasibility_csv({p}, {solved});
    const auto lines = split_lines(text);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "n_nucleons,lambda_m,eta,omega_rad_s,resolution_ratio");
    CHECK(lines[1].rfind("1000000,", 0) == 0);
    CHECK(std::stod(split_lines(text)[2].substr(0, lines[2].find(','))) ==
          1057127883.6637449);

    const auto bare = report::feasibility_csv({p});
    CHECK(split_lines(bare).size() == 2);
}

TEST_CASE("json documents mirror the csv content") {
    const auto j = nlohmann::json::parse(report::summary_json(sample_summary()));
    REQUIRE(j.contains("summary"));
    CHECK(j["summary"]["eta"].get<double>() == 0.5);
    CHECK(j["summary"]["parity_expectation"].get<double>() == 1.0);
    CHECK(j["summary"]["acceptance_probability"].get<double>() ==
          0.66946245394212361);
    CHECK(j["summary"]["thermal_levels"].get<int>() == 23);
    CHECK(j["summary"]["resolution_adequate"].get<int>() == 1);
    CHECK(j["summary"].size() == 12);

    std::vector<pipeline::SweepRow> rows(1);
    rows[0].axis_value = 0.25;
    rows[0].summary = sample_summary();
    const auto sj = nlohmann::json::parse(
        report::sweep_json(pipeline::SweepAxis::eta, rows));
    CHECK(sj["axis"].get<std::string>() == "eta");
    REQUIRE(sj["rows"].size() == 1);
    CHECK(sj["rows"][0]["axis_value"].get<double>() == 0.25);
    CHECK(sj["rows"][0]["summary"]["mirror_dim"].get<int>() == 43);

    const auto cj = nlohmann::json::parse(report::clicks_json(sample_stream()));
    CHECK(cj["summary"]["n_events"].get<std::int64_t>() == 3);
    CHECK(cj["summary"]["wilson_high"].get<double>() == 0.65761999385838759);
    REQUIRE(cj["records"].size() == 3);
    CHECK(cj["records"][1]["detector"].get<std::string>() == "D2");
    CHECK(cj["records"][1]["shift_j"].get<int>() == -3);
    CHECK(cj["records"][1]["accepted"].get<bool>() == false);

    feasibility::FeasibilityPoint p;
    p.n_nucleons = 42;
    p.lambda_m = 1e-10;
    p.eta = 0.5;
    p.omega_rad_s = 1.0;
    p.resolution_ratio = 2.0;
    const auto fj = nlohmann::json::parse(report::feasibility_json({p}));
    CHECK(fj["points"][0]["n_nucleons"].get<std::int64_t>() == 42);
    CHECK_FALSE(fj.contains("solved"));
    const auto fj2 = nlohmann::json::parse(
        report::feasibility_json({p}, {report::SolvedFeasibilityRow{1.5, 1, 1, 1, 1}}));
    CHECK(fj2["solved"][0]["n_nucleons"].get<double>() == 1.5);
}

TEST_CASE("click digest text") {
    const auto text = report::click_summary_text(sample_stream().summary);
    CHECK(text.find("events 3") != std::string::npos);
    CHECK(text.find("accepted 2") != std::string::npos);
    CHECK(text.find("accepted D2 0") != std::string::npos);
    CHECK(text.find("95% CI [") != std::string::npos);
    CHECK(text.find("grw hits") == std::string::npos);
    CHECK(text.back() == '\n');

    auto s = sample_stream().summary;
    s.total_hits = 77;
    CHECK(report::click_summary_text(s).find("grw hits 77") != std::string::npos);
}

TEST_CASE("write_output writes files byte for byte") {
    const std::string path = "mparity_report_test.tmp";
    const std::string payload = "alpha,beta\n1,2\n";
    report::write_output(path, payload);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream read_back;
    read_back << in.rdbuf();
    CHECK(read_back.str() == payload);
    in.close();
    CHECK(std::remove(path.c_str()) == 0);

    CHECK_THROWS_AS(report::write_output("/nonexistent_dir_zz9/file.csv", payload),
                    InvalidArgumentError);
}
