#include "mparity/detection.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mparity/constants.hpp"
#include "mparity/errors.hpp"
#include "mparity/parallel.hpp"
#include "mparity/rng.hpp"

namespace mparity::detection {

PostSelection::PostSelection(int j_max_, double resolution_ratio_)
    : j_max(j_max_), resolution_ratio(resolution_ratio_) {
    if (j_max < 0) {
        throw InvalidArgumentError("PostSelection: j_max must be >= 0");
    }
    if (!(std::isfinite(resolution_ratio) && resolution_ratio >= 0.0)) {
        throw InvalidArgumentError("PostSelection: resolution_ratio must be >= 0");
    }
}

bool PostSelection::resolution_adequate(double omega_rad_s,
                                        double photon_energy_J) const {
    if (!(omega_rad_s > 0.0) || !(photon_energy_J > 0.0)) {
        throw InvalidArgumentError(
            "resolution_adequate: omega and photon energy must be > 0");
    }
    return resolution_ratio * photon_energy_J < constants::hbar * omega_rad_s;
}

namespace {

void require_joint(const Eigen::MatrixXcd& joint, int mirror_dim, const char* who) {
    if (mirror_dim < 1 || joint.rows() != 2 * mirror_dim || joint.cols() != 2 * mirror_dim) {
        throw InvalidArgumentError(std::string(who) +
                                   ": joint matrix must be 2 * mirror_dim square");
    }
}

}  // namespace

Eigen::Matrix2cd partial_trace_mirror(const Eigen::MatrixXcd& joint, int mirror_dim) {
    require_joint(joint, mirror_dim, "partial_trace_mirror");
    Eigen::Matrix2cd photon;
    photon(0, 0) = joint.topLeftCorner(mirror_dim, mirror_dim).trace();
    photon(0, 1) = joint.topRightCorner(mirror_dim, mirror_dim).trace();
    photon(1, 0) = joint.bottomLeftCorner(mirror_dim, mirror_dim).trace();
    photon(1, 1) = joint.bottomRightCorner(mirror_dim, mirror_dim).trace();
    return photon;
}

Eigen::MatrixXcd partial_trace_photon(const Eigen::MatrixXcd& joint, int mirror_dim) {
    require_joint(joint, mirror_dim, "partial_trace_photon");
    return joint.topLeftCorner(mirror_dim, mirror_dim) +
           joint.bottomRightCorner(mirror_dim, mirror_dim);
}

PostSelectedState post_select_level(const Eigen::MatrixXcd& joint, int mirror_dim,
                                    int level, const PostSelection& rule) {
    require_joint(joint, mirror_dim, "post_select_level");
    if (level < 0 || level >= mirror_dim) {
        throw InvalidArgumentError("post_select_level: level outside the mirror basis");
    }
    PostSelectedState out;
    out.rho = joint;
    for (int m = 0; m < mirror_dim; ++m) {
        if (rule.accepts(m - level)) continue;
        out.rho.row(m).setZero();
        out.rho.col(m).setZero();
        out.rho.row(mirror_dim + m).setZero();
        out.rho.col(mirror_dim + m).setZero();
    }
    out.acceptance = out.rho.trace().real();
    return out;
}

double photon_parity_expectation(const Eigen::Matrix2cd& photon_rho) {
    const double p_s = photon_rho(0, 0).real();
    const double p_as = photon_rho(1, 1).real();
    const double total = p_s + p_as;
    if (!(total > 1e-15)) {
        throw EmptyDataSetError(
            "photon_parity_expectation: no statistical weight survived post-selection");
    }
    return (p_s - p_as) / total;
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0) {
        throw EmptyDataSetError("wilson_interval: no trials");
    }
    if (successes < 0 || successes > trials) {
        throw InvalidArgumentError("wilson_interval: successes outside [0, trials]");
    }
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = phat + z2 / (2.0 * n);
    const double margin = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    WilsonInterval interval{std::max(0.0, (center - margin) / denom),
                            std::min(1.0, (center + margin) / denom)};
    // At the boundary proportions the analytic bound is exact; do not let
    // rounding in center - margin leak a spurious epsilon inside.
    if (successes == 0) interval.low = 0.0;
    if (successes == trials) interval.high = 1.0;
    return interval;
}

namespace {

/// Sampling table holding only strictly positive outcome weights, so a lookup
/// can never land on a zero-probability bin, not even through rounding.
struct OutcomeTable {
    std::vector<int> flat_index;
    std::vector<double> cumulative;

    void build(const Eigen::VectorXd& weights) {
        flat_index.clear();
        cumulative.clear();
        double acc = 0.0;
        for (int i = 0; i < weights.size(); ++i) {
            if (weights(i) > 0.0) {
                acc += weights(i);
                flat_index.push_back(i);
                cumulative.push_back(acc);
            }
        }
        if (flat_index.empty()) {
            throw EmptyDataSetError("simulate_clicks: a level has no reachable outcome");
        }
    }

    int sample(double u01) const {
        const double u = u01 * cumulative.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            return flat_index.back();
        }
        return flat_index[static_cast<std::size_t>(it - cumulative.begin())];
    }
};

}  // namespace

ClickStream simulate_clicks(const thermal::MirrorEnsemble& ensemble,
                            fock::LambDicke eta,
                            const decoherence::DecoherenceModel& model,
                            const PostSelection& rule, const ClickOptions& options) {
    model.validate();
    if (options.n_events < 1) {
        throw InvalidArgumentError("simulate_clicks: n_events must be >= 1");
    }
    if (ensemble.dim < 1) {
        throw InvalidArgumentError("simulate_clicks: empty ensemble");
    }

    const int dim = scattering::choose_mirror_dim(ensemble.top_level(), eta, options.pad,
                                                  options.trunc_tol);
    const scattering::ScatterOperators ops =
        scattering::make_scatter_operators(eta, dim, options.pad, options.trunc_tol);

    // Level-selection table over the ensemble weights.
    Eigen::VectorXd level_weights(ensemble.dim);
    std::vector<int> level_of(ensemble.dim);
    for (int i = 0; i < ensemble.dim; ++i) {
        level_of[i] = ensemble.levels[i].first;
        level_weights(i) = ensemble.levels[i].second;
    }
    OutcomeTable level_table;
    level_table.build(level_weights);

    const bool grw = model.variant == decoherence::Variant::grw;
    std::vector<scattering::JointState> states(ensemble.dim);
    std::vector<OutcomeTable> outcome_tables;
    decoherence::PositionBasis basis;

    for (int i = 0; i < ensemble.dim; ++i) {
        states[i] = scattering::scatter(level_of[i], ops);
    }

    if (grw) {
        basis = decoherence::PositionBasis::build(dim, ensemble.params.x_zpf());
    } else {
        // Exact per-level outcome distribution over (branch, m).  For the
        // localization channel only the branch-diagonal blocks matter, and
        // each evolves as a mirror-only state under the same map.
        outcome_tables.resize(ensemble.dim);
        for (int i = 0; i < ensemble.dim; ++i) {
            const auto& st = states[i];
            Eigen::VectorXd w(2 * dim);
            w.head(dim) = st.amp_sym.cwiseAbs2();
            w.tail(dim) = st.amp_asym.cwiseAbs2();
            if (model.variant == decoherence::Variant::localization &&
                model.duration_s > 0.0) {
                for (int branch = 0; branch < 2; ++branch) {
                    const Eigen::VectorXcd& amp = branch == 0 ? st.amp_sym : st.amp_asym;
                    const double p_branch = amp.squaredNorm();
                    if (!(p_branch > 1e-300)) {
                        w.segment(branch * dim, dim).setZero();
                        continue;
                    }
                    const Eigen::MatrixXcd rho_branch =
                        (amp * amp.adjoint()) / p_branch;
                    const decoherence::LocalizationResult evolved =
                        decoherence::apply_localization(rho_branch, dim, ensemble.params,
                                                        model, options.loc_opts);
                    w.segment(branch * dim, dim) =
                        p_branch * evolved.rho.diagonal().real().cwiseMax(0.0);
                }
            }
            outcome_tables[i].build(w);
        }
    }

    ClickStream stream;
    stream.records.resize(static_cast<std::size_t>(options.n_events));

    struct Tally {
        std::int64_t accepted = 0;
        std::int64_t d1_accepted = 0;
        std::int64_t d2_accepted = 0;
        std::int64_t d1_total = 0;
        std::int64_t d2_total = 0;
        std::int64_t hits = 0;
        std::int64_t resamples = 0;
    };

    Tally tally = parallel::reduce<Tally>(
        0, options.n_events, /*leaf_size=*/4096, options.threads,
        [&](std::int64_t lo, std::int64_t hi) {
            Tally t;
            for (std::int64_t i = lo; i < hi; ++i) {
                std::mt19937_64 gen(rng::mix_seed(options.seed, static_cast<std::uint64_t>(i)));
                const int level_idx = level_table.sample(rng::canonical(gen));
                const int level = level_of[level_idx];

                int flat;
                if (grw) {
                    const decoherence::GrwTrajectoryResult traj = decoherence::grw_trajectory(
                        states[level_idx], basis, ensemble.params, model, gen());
                    t.hits += traj.n_hits;
                    t.resamples += traj.n_resamples;
                    Eigen::VectorXd w(2 * dim);
                    w.head(dim) = traj.state.amp_sym.cwiseAbs2();
                    w.tail(dim) = traj.state.amp_asym.cwiseAbs2();
                    const double u = rng::canonical(gen) * w.sum();
                    double acc = 0.0;
                    int pick = -1;
                    int last_positive = -1;
                    for (int k = 0; k < 2 * dim; ++k) {
                        if (w(k) > 0.0) last_positive = k;
                        acc += w(k);
                        if (u < acc && w(k) > 0.0) {
                            pick = k;
                            break;
                        }
                    }
                    flat = pick >= 0 ? pick : last_positive;
                } else {
                    flat = outcome_tables[level_idx].sample(rng::canonical(gen));
                }

                const int branch = flat / dim;
                const int m = flat % dim;
                ClickRecord& rec = stream.records[static_cast<std::size_t>(i)];
                rec.trajectory_id = i;
                rec.detector = branch == 0 ? Detector::d1 : Detector::d2;
                rec.shift_j = m - level;
                rec.accepted = rule.accepts(rec.shift_j);

                (branch == 0 ? t.d1_total : t.d2_total) += 1;
                if (rec.accepted) {
                    t.accepted += 1;
                    (branch == 0 ? t.d1_accepted : t.d2_accepted) += 1;
                }
            }
            return t;
        },
        [](Tally a, Tally b) {
            a.accepted += b.accepted;
            a.d1_accepted += b.d1_accepted;
            a.d2_accepted += b.d2_accepted;
            a.d1_total += b.d1_total;
            a.d2_total += b.d2_total;
            a.hits += b.hits;
            a.resamples += b.resamples;
            return a;
        });

    if (tally.accepted == 0) {
        throw EmptyDataSetError(
            "simulate_clicks: post-selection removed every event; widen j_max or "
            "increase n_events");
    }

    ClickSummary& s = stream.summary;
    s.n_events = options.n_events;
    s.n_accepted = tally.accepted;
    s.d1_accepted = tally.d1_accepted;
    s.d2_accepted = tally.d2_accepted;
    s.d1_total = tally.d1_total;
    s.d2_total = tally.d2_total;
    s.d2_fraction_accepted =
        static_cast<double>(tally.d2_accepted) / static_cast<double>(tally.accepted);
    s.d2_fraction_total =
        static_cast<double>(tally.d2_total) / static_cast<double>(options.n_events);
    s.acceptance_rate =
        static_cast<double>(tally.accepted) / static_cast<double>(options.n_events);
    const WilsonInterval wilson = wilson_interval(tally.d2_accepted, tally.accepted);
    s.wilson_low = wilson.low;
    s.wilson_high = wilson.high;
    s.total_hits = tally.hits;
    s.total_resamples = tally.resamples;
    return stream;
}

}  // namespace mparity::detection
