#pragma once

#include <string>
#include <vector>

#include "mparity/detection.hpp"
#include "mparity/feasibility.hpp"
#include "mparity/pipeline.hpp"

namespace mparity::report {

/// Feasibility row solved for a real-valued nucleon count (the inversion of
/// the curve at a requested resolution target).
struct SolvedFeasibilityRow {
    double n_nucleons = 0.0;
    double lambda_m = 0.0;
    double eta = 0.0;
    double omega_rad_s = 0.0;
    double resolution_ratio = 0.0;
};

// CSV emitters.  Every floating-point cell uses round-trip formatting, so a
// rerun with identical inputs produces identical bytes.
std::string summary_csv(const pipeline::Summary& summary);
std::string sweep_csv(pipeline::SweepAxis axis, const std::vector<pipeline::SweepRow>& rows);
std::string clicks_csv(const detection::ClickStream& stream);
std::string feasibility_csv(const std::vector<feasibility::FeasibilityPoint>& points,
                            const std::vector<SolvedFeasibilityRow>& solved = {});

// Structured-document (JSON) emitters carrying the same field names.
std::string summary_json(const pipeline::Summary& summary);
std::string sweep_json(pipeline::SweepAxis axis, const std::vector<pipeline::SweepRow>& rows);
std::string clicks_json(const detection::ClickStream& stream);
std::string feasibility_json(const std::vector<feasibility::FeasibilityPoint>& points,
                             const std::vector<SolvedFeasibilityRow>& solved = {});

/// Short human-readable digest of a click run (for stderr, not for --out).
std::string click_summary_text(const detection::ClickSummary& summary);

/// Write to the given path, or to stdout when the path is empty.
void write_output(const std::string& path, const std::string& bytes);

}  // namespace mparity::report
