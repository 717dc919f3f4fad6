#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "mparity/scattering.hpp"
#include "mparity/thermal.hpp"

namespace mparity::decoherence {

enum class Variant { none, localization, grw };

/// Which decoherence mechanism acts on the mirror between scattering and
/// detection, and for how long.
struct DecoherenceModel {
    Variant variant = Variant::none;

    /// Continuous localization rate density, m^-2 s^-1 (the double-commutator
    /// coefficient of dephasing in position).
    double lambda_loc = 0.0;

    /// Spontaneous-hit rate per nucleon, Hz; the mirror's total rate is this
    /// times its nucleon count.
    double rate_per_nucleon_hz = 0.0;
    /// Spatial width of a hit's Gaussian collapse operator, metres.
    double width_m = 0.0;

    /// Interaction time between scattering and detection, seconds.
    double duration_s = 0.0;

    /// Interleave the free oscillator evolution exp(-i omega t n) with the
    /// localization dissipator.  GRW trajectories apply hits only, so the
    /// flag has no effect there.
    bool include_free_evolution = true;

    static DecoherenceModel none_model();
    static DecoherenceModel localization(double lambda_loc, double duration_s,
                                         bool include_free_evolution = true);
    static DecoherenceModel grw(double rate_per_nucleon_hz, double width_m,
                                double duration_s);

    /// Throws unless every parameter needed by the active variant is valid.
    void validate() const;
};

/// Spectral decomposition of the position operator x = x_zpf (a + a^dag) on
/// the truncated basis.  Shared by the localization channel and the GRW hit
/// sampler so the O(dim^3) solve happens once per run, not per event.
struct PositionBasis {
    int dim = 0;
    Eigen::MatrixXd vectors;  // columns are eigenvectors, Fock -> position
    Eigen::VectorXd x_m;      // eigenvalues, metres, ascending

    static PositionBasis build(int dim, double x_zpf_m);
};

/// Controls for the split-step localization propagator.
struct LocalizationOptions {
    /// Fixed step count; 0 means refine automatically by doubling until two
    /// successive runs agree to step_tol in max-abs entry difference.
    int n_steps = 0;
    double step_tol = 1e-7;
    int max_steps = 1 << 16;
};

struct LocalizationResult {
    Eigen::MatrixXcd rho;
    int n_steps = 0;
    /// Max-abs difference between the last two refinement levels (0 when a
    /// fixed step count or an exact one-shot path was used).
    double step_error = 0.0;
};

/// Evolve a density matrix under
///   d rho / dt = -i omega [n, rho] - lambda_loc [x, [x, rho]]
/// for model.duration_s.  rho is either mirror-only (mirror_dim rows) or a
/// joint photon-mirror state (2 * mirror_dim rows, branch-major); the photon
/// does not couple, so each photon block evolves under the same mirror map.
/// Both split substeps are exact — the dissipator is diagonal in the position
/// eigenbasis, the free evolution in the number basis — so the only error is
/// the Strang commutator term, which the automatic refinement controls.
LocalizationResult apply_localization(const Eigen::MatrixXcd& rho, int mirror_dim,
                                      const thermal::MirrorParams& mirror,
                                      const DecoherenceModel& model,
                                      const LocalizationOptions& opts = {});

struct GrwTrajectoryResult {
    scattering::JointState state;
    int n_hits = 0;
    /// Hits whose collapse annihilated the state numerically and had their
    /// center redrawn (diagnostic; effectively zero in practice).
    int n_resamples = 0;
};

/// One stochastic GRW record: draw the hit count from Poisson(total rate x
/// duration), then for each hit draw a center from the current position
/// distribution and apply the Gaussian collapse exp(-(x - c)^2 / (2 width^2)),
/// renormalizing.  Deterministic for a given rng_seed.
GrwTrajectoryResult grw_trajectory(const scattering::JointState& psi,
                                   const PositionBasis& basis,
                                   const thermal::MirrorParams& mirror,
                                   const DecoherenceModel& model, std::uint64_t rng_seed);

/// Convenience overload that builds the position basis internally.
GrwTrajectoryResult grw_trajectory(const scattering::JointState& psi,
                                   const thermal::MirrorParams& mirror,
                                   const DecoherenceModel& model, std::uint64_t rng_seed);

struct GrwAverageResult {
    Eigen::MatrixXcd rho;  // 2 dim x 2 dim, branch-major
    std::int64_t total_hits = 0;
    std::int64_t total_resamples = 0;
};

/// Trajectory-averaged density matrix over n_trajectories GRW records.  Each
/// trajectory i is seeded with mix_seed(seed, i) and the average is assembled
/// with a fixed pairwise reduction, so the result is independent of both
/// thread count and scheduling.
GrwAverageResult grw_average(const scattering::JointState& psi,
                             const thermal::MirrorParams& mirror,
                             const DecoherenceModel& model, int n_trajectories,
                             std::uint64_t seed, int threads = 1);

}  // namespace mparity::decoherence
