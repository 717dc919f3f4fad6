#include "mparity/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "mparity/constants.hpp"
#include "mparity/errors.hpp"
#include "mparity/feasibility.hpp"
#include "mparity/parallel.hpp"
#include "mparity/rng.hpp"

namespace mparity::pipeline {

ResolvedExperiment resolve(const config::ExperimentConfig& cfg) {
    config::validate(cfg);
    const double mass = static_cast<double>(cfg.n_nucleons) * constants::nucleon_mass;

    double omega = 0.0;
    double eta_value = 0.0;
    if (cfg.omega_rad_s && cfg.eta) {
        omega = *cfg.omega_rad_s;
        eta_value = *cfg.eta;
    } else if (cfg.omega_rad_s && cfg.lambda_m) {
        omega = *cfg.omega_rad_s;
        eta_value = feasibility::eta_from_omega(omega, *cfg.lambda_m, mass,
                                                cfg.geometry_factor);
    } else {
        // validate() guarantees the remaining pair is (eta, lambda).
        eta_value = *cfg.eta;
        omega = feasibility::omega_from_eta(eta_value, *cfg.lambda_m, mass,
                                            cfg.geometry_factor);
    }

    ResolvedExperiment exp{
        thermal::MirrorParams::from_nucleons(cfg.n_nucleons, omega, cfg.temperature_K),
        fock::LambDicke(eta_value),
        cfg.lambda_m,
        decoherence::DecoherenceModel{},
        detection::PostSelection(cfg.j_max, cfg.resolution_ratio)};

    exp.model.variant = cfg.variant;
    exp.model.lambda_loc = cfg.lambda_loc;
    exp.model.rate_per_nucleon_hz = cfg.rate_per_nucleon_hz;
    exp.model.width_m = cfg.width_m;
    exp.model.duration_s = cfg.duration_s;
    exp.model.include_free_evolution = cfg.include_free_evolution;
    exp.model.validate();
    return exp;
}

namespace {

/// Weighted branch statistics accumulated over the thermal levels.
struct LevelStats {
    double p_sym_accepted = 0.0;
    double p_asym_accepted = 0.0;
    double p_asym_total = 0.0;
    double p_total = 0.0;
    double max_deficit = 0.0;

    LevelStats& operator+=(const LevelStats& o) {
        p_sym_accepted += o.p_sym_accepted;
        p_asym_accepted += o.p_asym_accepted;
        p_asym_total += o.p_asym_total;
        p_total += o.p_total;
        max_deficit = std::max(max_deficit, o.max_deficit);
        return *this;
    }
};

/// Accepted-window weight of a branch distribution for initial level n.
double accepted_weight(const Eigen::VectorXd& probs, int level,
                       const detection::PostSelection& rule) {
    double acc = 0.0;
    for (int m = 0; m < probs.size(); ++m) {
        if (rule.accepts(m - level)) acc += probs(m);
    }
    return acc;
}

LevelStats level_stats_exact(const scattering::JointState& st,
                             const thermal::MirrorParams& mirror,
                             const decoherence::DecoherenceModel& model,
                             const decoherence::LocalizationOptions& loc_opts,
                             const detection::PostSelection& rule) {
    // Branch populations and accepted weights only involve the photon-diagonal
    // blocks, and each branch block evolves as a mirror-only state under the
    // localization map, so the full joint matrix is never materialized here.
    const int dim = st.dim;
    Eigen::VectorXd p_sym = st.amp_sym.cwiseAbs2();
    Eigen::VectorXd p_asym = st.amp_asym.cwiseAbs2();
    if (model.variant == decoherence::Variant::localization && model.duration_s > 0.0) {
        for (int branch = 0; branch < 2; ++branch) {
            const Eigen::VectorXcd& amp = branch == 0 ? st.amp_sym : st.amp_asym;
            Eigen::VectorXd& probs = branch == 0 ? p_sym : p_asym;
            const double p_branch = amp.squaredNorm();
            if (!(p_branch > 1e-300)) {
                probs.setZero();
                continue;
            }
            const Eigen::MatrixXcd rho_branch = (amp * amp.adjoint()) / p_branch;
            const decoherence::LocalizationResult evolved =
                decoherence::apply_localization(rho_branch, dim, mirror, model, loc_opts);
            probs = p_branch * evolved.rho.diagonal().real().cwiseMax(0.0);
        }
    }

    LevelStats stats;
    stats.p_sym_accepted = accepted_weight(p_sym, st.level, rule);
    stats.p_asym_accepted = accepted_weight(p_asym, st.level, rule);
    stats.p_asym_total = p_asym.sum();
    stats.p_total = p_sym.sum() + p_asym.sum();
    stats.max_deficit = st.norm_deficit;
    return stats;
}

LevelStats level_stats_grw(const scattering::JointState& st,
                           const decoherence::PositionBasis& basis,
                           const thermal::MirrorParams& mirror,
                           const decoherence::DecoherenceModel& model,
                           const detection::PostSelection& rule, int n_trajectories,
                           std::uint64_t level_seed, int threads) {
    LevelStats sum = parallel::reduce<LevelStats>(
        0, n_trajectories, /*leaf_size=*/32, threads,
        [&](std::int64_t lo, std::int64_t hi) {
            LevelStats partial;
            for (std::int64_t i = lo; i < hi; ++i) {
                const decoherence::GrwTrajectoryResult traj = decoherence::grw_trajectory(
                    st, basis, mirror, model,
                    rng::mix_seed(level_seed, static_cast<std::uint64_t>(i)));
                const Eigen::VectorXd p_sym = traj.state.amp_sym.cwiseAbs2();
                const Eigen::VectorXd p_asym = traj.state.amp_asym.cwiseAbs2();
                partial.p_sym_accepted += accepted_weight(p_sym, st.level, rule);
                partial.p_asym_accepted += accepted_weight(p_asym, st.level, rule);
                partial.p_asym_total += p_asym.sum();
                partial.p_total += p_sym.sum() + p_asym.sum();
            }
            return partial;
        },
        [](LevelStats a, LevelStats b) {
            a += b;
            return a;
        });
    const double inv = 1.0 / static_cast<double>(n_trajectories);
    sum.p_sym_accepted *= inv;
    sum.p_asym_accepted *= inv;
    sum.p_asym_total *= inv;
    sum.p_total *= inv;
    sum.max_deficit = st.norm_deficit;
    return sum;
}

}  // namespace

Summary simulate(const config::ExperimentConfig& cfg) {
    const ResolvedExperiment exp = resolve(cfg);
    const bool grw = exp.model.variant == decoherence::Variant::grw;
    if (grw && !cfg.seed) {
        throw InvalidArgumentError("simulate: run.seed is required for the grw variant");
    }

    const thermal::MirrorEnsemble ensemble =
        thermal::boltzmann_ensemble(exp.mirror, cfg.tail_tol);
    const int dim = scattering::choose_mirror_dim(ensemble.top_level(), exp.eta, cfg.pad,
                                                  cfg.trunc_tol);
    const scattering::ScatterOperators ops =
        scattering::make_scatter_operators(exp.eta, dim, cfg.pad, cfg.trunc_tol);

    decoherence::LocalizationOptions loc_opts;
    loc_opts.n_steps = cfg.n_steps;
    loc_opts.step_tol = cfg.step_tol;

    decoherence::PositionBasis basis;
    if (grw) {
        basis = decoherence::PositionBasis::build(dim, exp.mirror.x_zpf());
    }

    const std::uint64_t seed = cfg.seed.value_or(0);
    LevelStats totals = parallel::reduce<LevelStats>(
        0, ensemble.dim, /*leaf_size=*/1, grw ? 1 : cfg.threads,
        [&](std::int64_t lo, std::int64_t hi) {
            LevelStats partial;
            for (std::int64_t i = lo; i < hi; ++i) {
                const auto& [level, weight] = ensemble.levels[static_cast<std::size_t>(i)];
                const scattering::JointState st = scattering::scatter(level, ops);
                LevelStats stats =
                    grw ? level_stats_grw(st, basis, exp.mirror, exp.model, exp.rule,
                                          cfg.n_trajectories,
                                          rng::mix_seed(seed, static_cast<std::uint64_t>(level)),
                                          cfg.threads)
                        : level_stats_exact(st, exp.mirror, exp.model, loc_opts, exp.rule);
                partial.p_sym_accepted += weight * stats.p_sym_accepted;
                partial.p_asym_accepted += weight * stats.p_asym_accepted;
                partial.p_asym_total += weight * stats.p_asym_total;
                partial.p_total += weight * stats.p_total;
                partial.max_deficit = std::max(partial.max_deficit, stats.max_deficit);
            }
            return partial;
        },
        [](LevelStats a, LevelStats b) {
            a += b;
            return a;
        });

    const double accepted = totals.p_sym_accepted + totals.p_asym_accepted;
    if (!(accepted > 1e-15)) {
        throw EmptyDataSetError("simulate: post-selection removed all weight");
    }

    Summary s;
    s.temperature_K = exp.mirror.temperature_K;
    s.eta = exp.eta.value;
    s.omega_rad_s = exp.mirror.omega_rad_s;
    s.x_zpf_m = exp.mirror.x_zpf();
    s.parity_expectation =
        (totals.p_sym_accepted - totals.p_asym_accepted) / accepted;
    s.acceptance_probability = accepted;
    s.d2_fraction_accepted = totals.p_asym_accepted / accepted;
    s.d2_fraction_total = totals.p_asym_total / totals.p_total;
    s.thermal_levels = ensemble.dim;
    s.mirror_dim = dim;
    s.max_norm_deficit = totals.max_deficit;
    if (exp.lambda_m) {
        s.resolution_adequate =
            exp.rule.resolution_adequate(exp.mirror.omega_rad_s,
                                         feasibility::photon_energy(*exp.lambda_m))
                ? 1
                : 0;
    } else {
        s.resolution_adequate = -1;
    }
    return s;
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "temperature") return SweepAxis::temperature;
    if (name == "eta") return SweepAxis::eta;
    if (name == "loc_strength") return SweepAxis::loc_strength;
    if (name == "grw_rate") return SweepAxis::grw_rate;
    throw InvalidArgumentError(
        "sweep: unknown axis '" + name +
        "' (expected temperature, eta, loc_strength or grw_rate)");
}

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::temperature: return "temperature";
        case SweepAxis::eta: return "eta";
        case SweepAxis::loc_strength: return "loc_strength";
        case SweepAxis::grw_rate: return "grw_rate";
    }
    return "?";
}

std::vector<SweepRow> sweep(const config::ExperimentConfig& cfg, SweepAxis axis,
                            const std::vector<double>& grid) {
    if (grid.empty()) {
        throw InvalidArgumentError("sweep: grid must be nonempty");
    }
    for (const double v : grid) {
        if (!std::isfinite(v)) {
            throw InvalidArgumentError("sweep: grid values must be finite");
        }
    }
    if (axis == SweepAxis::loc_strength &&
        cfg.variant != decoherence::Variant::localization) {
        throw InvalidArgumentError(
            "sweep: loc_strength needs decoherence.variant = localization");
    }
    if (axis == SweepAxis::grw_rate && cfg.variant != decoherence::Variant::grw) {
        throw InvalidArgumentError("sweep: grw_rate needs decoherence.variant = grw");
    }

    // An eta sweep varies the coupling at a fixed mirror, so pin the resolved
    // trap frequency and drop the wavelength link that would contradict it.
    config::ExperimentConfig base = cfg;
    if (axis == SweepAxis::eta) {
        const ResolvedExperiment exp = resolve(cfg);
        base.omega_rad_s = exp.mirror.omega_rad_s;
        base.lambda_m.reset();
    }

    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (const double value : grid) {
        config::ExperimentConfig point = base;
        switch (axis) {
            case SweepAxis::temperature:
                point.temperature_K = value;
                break;
            case SweepAxis::eta:
                point.eta = value;
                break;
            case SweepAxis::loc_strength:
                point.lambda_loc = value;
                break;
            case SweepAxis::grw_rate:
                point.rate_per_nucleon_hz = value;
                break;
        }
        rows.push_back({value, simulate(point)});
    }
    return rows;
}

detection::ClickStream clicks(const config::ExperimentConfig& cfg) {
    config::validate(cfg, /*sampling_run=*/true);
    const ResolvedExperiment exp = resolve(cfg);
    const thermal::MirrorEnsemble ensemble =
        thermal::boltzmann_ensemble(exp.mirror, cfg.tail_tol);

    detection::ClickOptions options;
    options.n_events = cfg.n_events;
    options.seed = *cfg.seed;
    options.threads = cfg.threads;
    options.pad = cfg.pad;
    options.trunc_tol = cfg.trunc_tol;
    options.loc_opts.n_steps = cfg.n_steps;
    options.loc_opts.step_tol = cfg.step_tol;

    return detection::simulate_clicks(ensemble, exp.eta, exp.model, exp.rule, options);
}

}  // namespace mparity::pipeline
