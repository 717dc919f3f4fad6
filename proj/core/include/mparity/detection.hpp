#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mparity/decoherence.hpp"
#include "mparity/scattering.hpp"
#include "mparity/thermal.hpp"

namespace mparity::detection {

/// Energy-resolved post-selection applied to each detected photon: keep the
/// event when the mirror shift j = m - n is even and |j| <= j_max.
struct PostSelection {
    /// Half-width of the accepted shift window, in mirror quanta.
    int j_max = 0;
    /// Detector energy resolution as a fraction of the photon energy.
    double resolution_ratio = 0.0;

    PostSelection(int j_max, double resolution_ratio);

    bool accepts(int shift_j) const {
        const int a = shift_j < 0 ? -shift_j : shift_j;
        return a <= j_max && a % 2 == 0;
    }

    /// Shift-parity post-selection needs the detector to resolve single
    /// mirror quanta: resolution_ratio * E_photon < hbar * omega.
    bool resolution_adequate(double omega_rad_s, double photon_energy_J) const;
};

/// Trace out the mirror: 2x2 photon-branch matrix (S then AS) from a joint
/// branch-major state.
Eigen::Matrix2cd partial_trace_mirror(const Eigen::MatrixXcd& joint, int mirror_dim);

/// Trace out the photon branch: mirror_dim x mirror_dim motional state.
Eigen::MatrixXcd partial_trace_photon(const Eigen::MatrixXcd& joint, int mirror_dim);

struct PostSelectedState {
    /// Projected (not renormalized) joint state: its trace is the acceptance.
    Eigen::MatrixXcd rho;
    double acceptance = 0.0;
};

/// Apply the projector Pi_n = I_photon (x) sum_{accepted m} |m><m| for a
/// mirror prepared in level n, i.e. keep only shifts the rule accepts.
PostSelectedState post_select_level(const Eigen::MatrixXcd& joint, int mirror_dim,
                                    int level, const PostSelection& rule);

/// Photon-exchange parity from a photon branch matrix:
/// (p_S - p_AS) / (p_S + p_AS).  Throws when no weight survived.
double photon_parity_expectation(const Eigen::Matrix2cd& photon_rho);

enum class Detector : int { d1 = 1, d2 = 2 };

inline const char* to_string(Detector d) {
    return d == Detector::d1 ? "D1" : "D2";
}

/// One detected photon in a Monte Carlo click stream.
struct ClickRecord {
    std::int64_t trajectory_id = 0;
    Detector detector = Detector::d1;
    /// Mirror level shift j = m - n for this event.
    int shift_j = 0;
    bool accepted = false;
};

struct ClickSummary {
    std::int64_t n_events = 0;
    std::int64_t n_accepted = 0;
    std::int64_t d1_accepted = 0;
    std::int64_t d2_accepted = 0;
    std::int64_t d1_total = 0;
    std::int64_t d2_total = 0;
    double d2_fraction_accepted = 0.0;
    double d2_fraction_total = 0.0;
    double acceptance_rate = 0.0;
    /// 95% Wilson score interval for the accepted-set D2 fraction.
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    /// GRW bookkeeping (zero for the other decoherence variants).
    std::int64_t total_hits = 0;
    std::int64_t total_resamples = 0;
};

struct ClickOptions {
    std::int64_t n_events = 0;
    std::uint64_t seed = 0;
    int threads = 1;
    int pad = 20;
    double trunc_tol = fock::default_trunc_tol;
    /// Step control for the localization variant's exact outcome tables.
    decoherence::LocalizationOptions loc_opts{};
};

struct ClickStream {
    std::vector<ClickRecord> records;
    ClickSummary summary;
};

/// Sample n_events independent scattering events: draw the initial mirror
/// level from the ensemble, scatter, apply the decoherence model (an exact
/// outcome distribution for none/localization, a per-event collapse
/// trajectory for GRW) and record which detector fired and which shift the
/// photon energy revealed.  Event i consumes only the stream seeded with
/// mix_seed(seed, i), so records are byte-stable under any thread count, and
/// zero-probability outcomes are structurally unreachable (the sampler walks
/// a table holding only the strictly positive weights).
ClickStream simulate_clicks(const thermal::MirrorEnsemble& ensemble,
                            fock::LambDicke eta,
                            const decoherence::DecoherenceModel& model,
                            const PostSelection& rule, const ClickOptions& options);

/// Wilson score interval for a binomial proportion.
struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                               double z = 1.959963984540054);

}  // namespace mparity::detection
