#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mparity/config.hpp"
#include "mparity/detection.hpp"

namespace mparity::pipeline {

/// Physical objects implied by a validated config: mirror parameters with the
/// coupling path resolved (exactly two of omega / eta / lambda given, third
/// derived), the decoherence model and the post-selection rule.
struct ResolvedExperiment {
    thermal::MirrorParams mirror;
    fock::LambDicke eta;
    std::optional<double> lambda_m;
    decoherence::DecoherenceModel model;
    detection::PostSelection rule;
};

ResolvedExperiment resolve(const config::ExperimentConfig& cfg);

/// Ensemble-level observables of one experiment.
struct Summary {
    double temperature_K = 0.0;
    double eta = 0.0;
    double omega_rad_s = 0.0;
    double x_zpf_m = 0.0;
    /// Post-selected photon-exchange parity (D1 - D2) / (D1 + D2).
    double parity_expectation = 0.0;
    /// Probability that a detected photon passes the even-shift window.
    double acceptance_probability = 0.0;
    /// D2 share of the accepted events (the dark-port signal).
    double d2_fraction_accepted = 0.0;
    /// D2 share before post-selection.
    double d2_fraction_total = 0.0;
    int thermal_levels = 0;
    int mirror_dim = 0;
    /// Worst per-level norm lost above the truncation edge.
    double max_norm_deficit = 0.0;
    /// 1 = the configured detector resolves a mirror quantum, 0 = it does
    /// not, -1 = unknown because no wavelength was given.
    int resolution_adequate = -1;
};

/// Density-matrix pipeline: thermal ensemble -> scatter -> decoherence ->
/// post-selection -> branch statistics.  Deterministic for the none and
/// localization variants; the grw variant averages run.n_trajectories
/// collapse records per level (run.seed required) with a fixed reduction
/// tree, so results are reproducible and thread-count independent.
Summary simulate(const config::ExperimentConfig& cfg);

enum class SweepAxis { temperature, eta, loc_strength, grw_rate };

SweepAxis parse_axis(const std::string& name);
const char* to_string(SweepAxis axis);

struct SweepRow {
    double axis_value = 0.0;
    Summary summary;
};

/// Re-run simulate() across a grid of values on one axis.  temperature and
/// eta rebind the corresponding physical input (eta at fixed mirror, so the
/// wavelength link is dropped); loc_strength / grw_rate require the matching
/// decoherence variant.
std::vector<SweepRow> sweep(const config::ExperimentConfig& cfg, SweepAxis axis,
                            const std::vector<double>& grid);

/// Monte Carlo click stream for the configured experiment (run.seed required).
detection::ClickStream clicks(const config::ExperimentConfig& cfg);

}  // namespace mparity::pipeline
