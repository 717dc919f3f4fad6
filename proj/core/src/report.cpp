#include "mparity/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mparity/errors.hpp"
#include "mparity/format.hpp"

namespace mparity::report {

namespace {

using io::format_double;
using json = nlohmann::ordered_json;

constexpr const char* kSummaryColumns =
    "temperature_K,eta,omega_rad_s,x_zpf_m,parity_expectation,acceptance_probability,"
    "d2_fraction_accepted,d2_fraction_total,thermal_levels,mirror_dim,"
    "max_norm_deficit,resolution_adequate";

void append_summary_cells(std::string& out, const pipeline::Summary& s) {
    out += format_double(s.temperature_K);
    out += ',';
    out += format_double(s.eta);
    out += ',';
    out += format_double(s.omega_rad_s);
    out += ',';
    out += format_double(s.x_zpf_m);
    out += ',';
    out += format_double(s.parity_expectation);
    out += ',';
    out += format_double(s.acceptance_probability);
    out += ',';
    out += format_double(s.d2_fraction_accepted);
    out += ',';
    out += format_double(s.d2_fraction_total);
    out += ',';
    out += std::to_string(s.thermal_levels);
    out += ',';
    out += std::to_string(s.mirror_dim);
    out += ',';
    out += format_double(s.max_norm_deficit);
    out += ',';
    out += std::to_string(s.resolution_adequate);
}

json summary_object(const pipeline::Summary& s) {
    json j;
    j["temperature_K"] = s.temperature_K;
    j["eta"] = s.eta;
    j["omega_rad_s"] = s.omega_rad_s;
    j["x_zpf_m"] = s.x_zpf_m;
    j["parity_expectation"] = s.parity_expectation;
    j["acceptance_probability"] = s.acceptance_probability;
    j["d2_fraction_accepted"] = s.d2_fraction_accepted;
    j["d2_fraction_total"] = s.d2_fraction_total;
    j["thermal_levels"] = s.thermal_levels;
    j["mirror_dim"] = s.mirror_dim;
    j["max_norm_deficit"] = s.max_norm_deficit;
    j["resolution_adequate"] = s.resolution_adequate;
    return j;
}

json click_summary_object(const detection::ClickSummary& s) {
    json j;
    j["n_events"] = s.n_events;
    j["n_accepted"] = s.n_accepted;
    j["d1_accepted"] = s.d1_accepted;
    j["d2_accepted"] = s.d2_accepted;
    j["d1_total"] = s.d1_total;
    j["d2_total"] = s.d2_total;
    j["d2_fraction_accepted"] = s.d2_fraction_accepted;
    j["d2_fraction_total"] = s.d2_fraction_total;
    j["acceptance_rate"] = s.acceptance_rate;
    j["wilson_low"] = s.wilson_low;
    j["wilson_high"] = s.wilson_high;
    j["total_hits"] = s.total_hits;
    j["total_resamples"] = s.total_resamples;
    return j;
}

void append_feasibility_cells(std::string& out, const std::string& n_cell,
                              double lambda_m, double eta, double omega,
                              double ratio) {
    out += n_cell;
    out += ',';
    out += format_double(lambda_m);
    out += ',';
    out += format_double(eta);
    out += ',';
    out += format_double(omega);
    out += ',';
    out += format_double(ratio);
    out += '\n';
}

}  // namespace

std::string summary_csv(const pipeline::Summary& summary) {
    std::string out = kSummaryColumns;
    out += '\n';
    append_summary_cells(out, summary);
    out += '\n';
    return out;
}

std::string sweep_csv(pipeline::SweepAxis axis,
                      const std::vector<pipeline::SweepRow>& rows) {
    std::string out = "axis,axis_value,";
    out += kSummaryColumns;
    out += '\n';
    for (const auto& row : rows) {
        out += pipeline::to_string(axis);
        out += ',';
        out += format_double(row.axis_value);
        out += ',';
        append_summary_cells(out, row.summary);
        out += '\n';
    }
    return out;
}

std::string clicks_csv(const detection::ClickStream& stream) {
    std::string out = "trajectory_id,detector,shift_j,accepted\n";
    for (const auto& rec : stream.records) {
        out += std::to_string(rec.trajectory_id);
        out += ',';
        out += detection::to_string(rec.detector);
        out += ',';
        out += std::to_string(rec.shift_j);
        out += ',';
        out += rec.accepted ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string feasibility_csv(const std::vector<feasibility::FeasibilityPoint>& points,
                            const std::vector<SolvedFeasibilityRow>& solved) {
    std::string out = "n_nucleons,lambda_m,eta,omega_rad_s,resolution_ratio\n";
    for (const auto& p : points) {
        append_feasibility_cells(out, std::to_string(p.n_nucleons), p.lambda_m, p.eta,
                                 p.omega_rad_s, p.resolution_ratio);
    }
    for (const auto& p : solved) {
        append_feasibility_cells(out, format_double(p.n_nucleons), p.lambda_m, p.eta,
                                 p.omega_rad_s, p.resolution_ratio);
    }
    return out;
}

std::string summary_json(const pipeline::Summary& summary) {
    json j;
    j["summary"] = summary_object(summary);
    return j.dump(2) + "\n";
}

std::string sweep_json(pipeline::SweepAxis axis,
                       const std::vector<pipeline::SweepRow>& rows) {
    json j;
    j["axis"] = pipeline::to_string(axis);
    j["rows"] = json::array();
    for (const auto& row : rows) {
        json r;
        r["axis_value"] = row.axis_value;
        r["summary"] = summary_object(row.summary);
        j["rows"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

std::string clicks_json(const detection::ClickStream& stream) {
    json j;
    j["summary"] = click_summary_object(stream.summary);
    j["records"] = json::array();
    for (const auto& rec : stream.records) {
        json r;
        r["trajectory_id"] = rec.trajectory_id;
        r["detector"] = detection::to_string(rec.detector);
        r["shift_j"] = rec.shift_j;
        r["accepted"] = rec.accepted;
        j["records"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

std::string feasibility_json(const std::vector<feasibility::FeasibilityPoint>& points,
                             const std::vector<SolvedFeasibilityRow>& solved) {
    json j;
    j["points"] = json::array();
    for (const auto& p : points) {
        json r;
        r["n_nucleons"] = p.n_nucleons;
        r["lambda_m"] = p.lambda_m;
        r["eta"] = p.eta;
        r["omega_rad_s"] = p.omega_rad_s;
        r["resolution_ratio"] = p.resolution_ratio;
        j["points"].push_back(std::move(r));
    }
    if (!solved.empty()) {
        j["solved"] = json::array();
        for (const auto& p : solved) {
            json r;
            r["n_nucleons"] = p.n_nucleons;
            r["lambda_m"] = p.lambda_m;
            r["eta"] = p.eta;
            r["omega_rad_s"] = p.omega_rad_s;
            r["resolution_ratio"] = p.resolution_ratio;
            j["solved"].push_back(std::move(r));
        }
    }
    return j.dump(2) + "\n";
}

std::string click_summary_text(const detection::ClickSummary& s) {
    std::ostringstream out;
    out << "events " << s.n_events << ", accepted " << s.n_accepted << " ("
        << format_double(s.acceptance_rate) << "), accepted D2 " << s.d2_accepted
        << " (fraction " << format_double(s.d2_fraction_accepted) << ", 95% CI ["
        << format_double(s.wilson_low) << ", " << format_double(s.wilson_high) << "])";
    if (s.total_hits > 0) {
        out << ", grw hits " << s.total_hits;
    }
    out << '\n';
    return out.str();
}

void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty()) {
        std::cout << bytes;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidArgumentError("write_output: cannot open '" + path + "' for writing");
    }
    out << bytes;
    out.close();
    if (!out) {
        throw InvalidArgumentError("write_output: failed writing '" + path + "'");
    }
}

}  // namespace mparity::report
