#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mparity/decoherence.hpp"

namespace mparity::config {

/// Full description of one simulated experiment.  Flat dotted keys map 1:1
/// onto these fields (see key_names()); exactly two of {mirror.omega_rad_s,
/// photon.eta, photon.lambda_m} must be given — the third is derived, and
/// specifying all three is rejected as over-determined.
struct ExperimentConfig {
    // mirror.*
    std::int64_t n_nucleons = 1000000000;
    std::optional<double> omega_rad_s;
    double temperature_K = 0.0;
    double tail_tol = 1e-10;

    // photon.*
    std::optional<double> eta;
    std::optional<double> lambda_m;
    double geometry_factor = 2.0;

    // decoherence.*
    decoherence::Variant variant = decoherence::Variant::none;
    double lambda_loc = 0.0;
    double rate_per_nucleon_hz = 0.0;
    double width_m = 0.0;
    double duration_s = 0.0;
    bool include_free_evolution = true;
    int n_steps = 0;
    double step_tol = 1e-7;

    // post_selection.*
    int j_max = 10;
    double resolution_ratio = 0.0;

    // run.*
    std::int64_t n_events = 100000;
    int n_trajectories = 1000;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    int pad = 20;
    double trunc_tol = 1e-10;

    // output.*
    std::string out_path;
    std::string format = "csv";

    bool operator==(const ExperimentConfig&) const = default;
};

/// All recognized dotted keys, in canonical emission order.
const std::vector<std::string>& key_names();

/// Assign one dotted key from its text form.  Unknown keys and unparsable
/// values throw InvalidArgumentError naming the key.
void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parse "key = value" lines ('#' starts a comment; blank lines ignored).
/// A key may appear at most once.
ExperimentConfig parse(std::istream& in);
ExperimentConfig parse_file(const std::string& path);
ExperimentConfig parse_string(const std::string& text);

/// Canonical text form; parse(emit(cfg)) reproduces cfg exactly, including
/// every floating-point value (round-trip formatting).
std::string emit(const ExperimentConfig& cfg);

/// Apply MPARITY_<KEY> environment overrides (dots become underscores, all
/// upper case, e.g. photon.eta -> MPARITY_PHOTON_ETA).  Returns the keys that
/// were overridden.
std::vector<std::string> apply_env_overrides(ExperimentConfig& cfg);

/// Range-check every field (coupling-path rules included).  sampling_run adds
/// the requirement that run.seed is set, which stochastic commands need.
void validate(const ExperimentConfig& cfg, bool sampling_run = false);

}  // namespace mparity::config
