#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mparity/errors.hpp"

namespace mparity::thermal {

/// Physical parameters of the trapped mirror.  SI units.
struct MirrorParams {
    double mass_kg = 0.0;
    double omega_rad_s = 0.0;
    double temperature_K = 0.0;
    std::int64_t n_nucleons = 0;

    /// Build from a nucleon count (mass = n * m_nucleon).
    static MirrorParams from_nucleons(std::int64_t n_nucleons, double omega_rad_s,
                                      double temperature_K);

    /// Zero-point spread x_zpf = sqrt(hbar / (2 m omega)), metres.
    double x_zpf() const;
};

/// Truncated Boltzmann occupation of the mirror's motional levels: weights
/// l_n proportional to e^{-n hbar omega / kT}, renormalized over the retained
/// levels so they always sum to one.
struct MirrorEnsemble {
    MirrorParams params;
    /// (level, weight) pairs in ascending level order; weights sum to 1.
    std::vector<std::pair<int, double>> levels;
    /// Number of retained levels (= levels.size(); top level is dim - 1).
    int dim = 0;

    int top_level() const { return dim - 1; }
};

/// Retain levels until the next geometric weight ratio r^N drops below
/// tail_tol.  At T = 0 the ensemble is the single ground level.
MirrorEnsemble boltzmann_ensemble(const MirrorParams& params, double tail_tol = 1e-10);

/// Mean occupation of the (untruncated) Bose-Einstein distribution at these
/// parameters; used as a cross-check against the truncated weights.
double bose_einstein_mean(const MirrorParams& params);

}  // namespace mparity::thermal
