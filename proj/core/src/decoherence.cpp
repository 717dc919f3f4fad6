#include "mparity/decoherence.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mparity/constants.hpp"
#include "mparity/errors.hpp"
#include "mparity/parallel.hpp"
#include "mparity/rng.hpp"

namespace mparity::decoherence {

namespace {

void require_finite_nonneg(double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0.0)) {
        throw InvalidArgumentError(std::string("DecoherenceModel: ") + name +
                                   " must be finite and >= 0");
    }
}

/// (real matrix expression) x (complex vector) without materializing a
/// complex copy of the matrix: two real matvecs on the real/imag views.
template <class MatrixExpr>
Eigen::VectorXcd real_times_complex(const MatrixExpr& m, const Eigen::VectorXcd& x) {
    Eigen::VectorXcd out(m.rows());
    out.real() = m * x.real();
    out.imag() = m * x.imag();
    return out;
}

}  // namespace

DecoherenceModel DecoherenceModel::none_model() { return DecoherenceModel{}; }

DecoherenceModel DecoherenceModel::localization(double lambda_loc, double duration_s,
                                                bool include_free_evolution) {
    DecoherenceModel m;
    m.variant = Variant::localization;
    m.lambda_loc = lambda_loc;
    m.duration_s = duration_s;
    m.include_free_evolution = include_free_evolution;
    m.validate();
    return m;
}

DecoherenceModel DecoherenceModel::grw(double rate_per_nucleon_hz, double width_m,
                                       double duration_s) {
    DecoherenceModel m;
    m.variant = Variant::grw;
    m.rate_per_nucleon_hz = rate_per_nucleon_hz;
    m.width_m = width_m;
    m.duration_s = duration_s;
    m.validate();
    return m;
}

void DecoherenceModel::validate() const {
    switch (variant) {
        case Variant::none:
            return;
        case Variant::localization:
            require_finite_nonneg(lambda_loc, "lambda_loc");
            require_finite_nonneg(duration_s, "duration_s");
            return;
        case Variant::grw:
            require_finite_nonneg(rate_per_nucleon_hz, "rate_per_nucleon_hz");
            require_finite_nonneg(duration_s, "duration_s");
            if (!(std::isfinite(width_m) && width_m > 0.0)) {
                throw InvalidArgumentError("DecoherenceModel: width_m must be > 0");
            }
            return;
    }
    throw InvalidArgumentError("DecoherenceModel: unknown variant");
}

PositionBasis PositionBasis::build(int dim, double x_zpf_m) {
    if (dim < 1) {
        throw InvalidArgumentError("PositionBasis: dim must be >= 1");
    }
    if (!(std::isfinite(x_zpf_m) && x_zpf_m > 0.0)) {
        throw InvalidArgumentError("PositionBasis: x_zpf must be > 0");
    }
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const double v = x_zpf_m * std::sqrt(static_cast<double>(n));
        x(n - 1, n) = v;
        x(n, n - 1) = v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("PositionBasis: eigensolver failed");
    }
    PositionBasis basis;
    basis.dim = dim;
    basis.vectors = solver.eigenvectors();
    basis.x_m = solver.eigenvalues();
    return basis;
}

namespace {

void check_density_matrix(const Eigen::MatrixXcd& rho, const char* who) {
    if (rho.rows() != rho.cols()) {
        throw InvalidArgumentError(std::string(who) + ": matrix must be square");
    }
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm <= 1e-10)) {
        throw InvalidStateError(std::string(who) +
                                ": input is not Hermitian (max |rho - rho^dag| = " +
                                std::to_string(herm) + ")");
    }
    const double tr = rho.trace().real();
    if (!(std::abs(tr - 1.0) <= 1e-8)) {
        throw InvalidStateError(std::string(who) + ": input trace " + std::to_string(tr) +
                                " is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success || !(solver.eigenvalues().minCoeff() >= -1e-10)) {
        throw InvalidStateError(std::string(who) + ": input is not positive semidefinite");
    }
}

/// Propagates mirror blocks under the localization generator with a fixed
/// step count.  Blocks are tracked in the position eigenbasis, where the
/// dissipator substep is an exact Hadamard product; the free-evolution
/// substep is folded into the single sandwich matrix t = V^T e^{-i omega dt n} V,
/// so one Strang step is one Hadamard product plus one conjugation per block.
struct LocalizationPropagator {
    double omega;
    double lambda;
    double duration;
    bool free_evolution;

    Eigen::MatrixXcd vc;          // position eigenvectors, complex copy
    Eigen::MatrixXd distance_sq;  // (x_i - x_j)^2, metres^2
    Eigen::VectorXd levels;       // 0, 1, ..., dim-1

    LocalizationPropagator(const PositionBasis& basis, double omega_rad_s,
                           double lambda_loc, double duration_s,
                           bool include_free_evolution)
        : omega(omega_rad_s),
          lambda(lambda_loc),
          duration(duration_s),
          free_evolution(include_free_evolution) {
        const int dim = basis.dim;
        vc = basis.vectors.cast<std::complex<double>>();
        distance_sq.resize(dim, dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                const double d = basis.x_m(i) - basis.x_m(j);
                distance_sq(i, j) = d * d;
            }
        }
        levels = Eigen::VectorXd::LinSpaced(dim, 0.0, dim - 1.0);
    }

    /// With only one of the two generators active the evolution is exact in
    /// closed form and no splitting is needed.
    bool needs_stepping() const { return lambda > 0.0 && free_evolution; }

    Eigen::VectorXcd phases(double t) const {
        const int dim = static_cast<int>(levels.size());
        Eigen::VectorXcd p(dim);
        for (int n = 0; n < dim; ++n) {
            p(n) = std::exp(std::complex<double>(0.0, -omega * t * n));
        }
        return p;
    }

    std::vector<Eigen::MatrixXcd> run(const std::vector<Eigen::MatrixXcd>& blocks,
                                      int n_steps) const {
        std::vector<Eigen::MatrixXcd> out;
        out.reserve(blocks.size());

        if (!needs_stepping()) {
            if (lambda > 0.0) {
                const Eigen::MatrixXcd damp =
                    (-lambda * duration * distance_sq).array().exp().cast<std::complex<double>>();
                for (const auto& b : blocks) {
                    out.push_back(vc * damp.cwiseProduct(vc.adjoint() * b * vc) *
                                  vc.adjoint());
                }
            } else {
                out.assign(blocks.begin(), blocks.end());
            }
            if (free_evolution) {
                const Eigen::VectorXcd p = phases(duration);
                for (auto& b : out) {
                    b = p.asDiagonal() * b * p.conjugate().asDiagonal();
                }
            }
            return out;
        }

        const double dt = duration / n_steps;
        const Eigen::MatrixXcd damp_half =
            (-0.5 * lambda * dt * distance_sq).array().exp().cast<std::complex<double>>();
        const Eigen::MatrixXcd damp_full =
            (-lambda * dt * distance_sq).array().exp().cast<std::complex<double>>();
        const Eigen::VectorXcd p = phases(dt);
        const Eigen::MatrixXcd t = vc.adjoint() * p.asDiagonal() * vc;
        const Eigen::MatrixXcd t_dag = t.adjoint();

        for (const auto& block : blocks) {
            Eigen::MatrixXcd b = vc.adjoint() * block * vc;  // to position basis
            b = damp_half.cwiseProduct(b);
            for (int k = 0; k < n_steps; ++k) {
                b = t * b * t_dag;
                if (k + 1 < n_steps) {
                    b = damp_full.cwiseProduct(b);
                }
            }
            b = damp_half.cwiseProduct(b);
            out.push_back(vc * b * vc.adjoint());  // back to the number basis
        }
        return out;
    }
};

double max_abs_diff(const std::vector<Eigen::MatrixXcd>& a,
                    const std::vector<Eigen::MatrixXcd>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, (a[i] - b[i]).cwiseAbs().maxCoeff());
    }
    return m;
}

}  // namespace

LocalizationResult apply_localization(const Eigen::MatrixXcd& rho, int mirror_dim,
                                      const thermal::MirrorParams& mirror,
                                      const DecoherenceModel& model,
                                      const LocalizationOptions& opts) {
    if (model.variant != Variant::localization) {
        throw InvalidArgumentError(
            "apply_localization: model variant must be localization");
    }
    model.validate();
    if (mirror_dim < 1) {
        throw InvalidArgumentError("apply_localization: mirror_dim must be >= 1");
    }
    const bool joint = rho.rows() == 2 * mirror_dim;
    if (!joint && rho.rows() != mirror_dim) {
        throw InvalidArgumentError(
            "apply_localization: rho must have mirror_dim or 2 * mirror_dim rows, got " +
            std::to_string(rho.rows()));
    }
    check_density_matrix(rho, "apply_localization");
    if (opts.n_steps < 0 || opts.max_steps < 1 || !(opts.step_tol > 0.0)) {
        throw InvalidArgumentError("apply_localization: invalid step options");
    }

    if (model.duration_s == 0.0) {
        return {rho, 0, 0.0};
    }

    const PositionBasis basis = PositionBasis::build(mirror_dim, mirror.x_zpf());
    const LocalizationPropagator prop(basis, mirror.omega_rad_s, model.lambda_loc,
                                      model.duration_s, model.include_free_evolution);

    // The photon index does not couple, so a joint state is four mirror blocks
    // evolving under one map; Hermiticity pins the lower off-diagonal block to
    // the adjoint of the upper one.
    std::vector<Eigen::MatrixXcd> blocks;
    if (joint) {
        blocks = {rho.topLeftCorner(mirror_dim, mirror_dim),
                  rho.topRightCorner(mirror_dim, mirror_dim),
                  rho.bottomRightCorner(mirror_dim, mirror_dim)};
    } else {
        blocks = {rho};
    }

    auto assemble = [&](const std::vector<Eigen::MatrixXcd>& evolved) {
        if (!joint) return evolved[0];
        Eigen::MatrixXcd full(2 * mirror_dim, 2 * mirror_dim);
        full.topLeftCorner(mirror_dim, mirror_dim) = evolved[0];
        full.topRightCorner(mirror_dim, mirror_dim) = evolved[1];
        full.bottomLeftCorner(mirror_dim, mirror_dim) = evolved[1].adjoint();
        full.bottomRightCorner(mirror_dim, mirror_dim) = evolved[2];
        return full;
    };

    const double trace_in = rho.trace().real();
    LocalizationResult result;

    if (!prop.needs_stepping()) {
        result.rho = assemble(prop.run(blocks, 1));
        result.n_steps = 0;
    } else if (opts.n_steps > 0) {
        result.rho = assemble(prop.run(blocks, opts.n_steps));
        result.n_steps = opts.n_steps;
    } else {
        int n = 64;
        std::vector<Eigen::MatrixXcd> prev = prop.run(blocks, n);
        for (;;) {
            if (2 * n > opts.max_steps) {
                throw ConvergenceError(
                    "apply_localization: step refinement did not reach tol " +
                    std::to_string(opts.step_tol) + " within " +
                    std::to_string(opts.max_steps) +
                    " steps; shorten the duration or set n_steps explicitly");
            }
            n *= 2;
            std::vector<Eigen::MatrixXcd> next = prop.run(blocks, n);
            const double diff = max_abs_diff(prev, next);
            if (diff <= opts.step_tol) {
                result.rho = assemble(next);
                result.n_steps = n;
                result.step_error = diff;
                break;
            }
            prev = std::move(next);
        }
    }

    const double drift = std::abs(result.rho.trace().real() - trace_in);
    if (!(drift <= 1e-8)) {
        throw ConvergenceError("apply_localization: trace drifted by " +
                               std::to_string(drift));
    }
    return result;
}

namespace {

constexpr double kZeroNormSq = 1e-30;
constexpr int kMaxResamples = 128;

}  // namespace

GrwTrajectoryResult grw_trajectory(const scattering::JointState& psi,
                                   const PositionBasis& basis,
                                   const thermal::MirrorParams& mirror,
                                   const DecoherenceModel& model,
                                   std::uint64_t rng_seed) {
    if (model.variant != Variant::grw) {
        throw InvalidArgumentError("grw_trajectory: model variant must be grw");
    }
    model.validate();
    if (basis.dim != psi.dim) {
        throw InvalidArgumentError("grw_trajectory: basis dim does not match state dim");
    }
    if (mirror.n_nucleons < 1) {
        throw InvalidArgumentError("grw_trajectory: mirror needs a nucleon count");
    }

    std::mt19937_64 gen(rng_seed);
    const double mean_hits = model.rate_per_nucleon_hz *
                             static_cast<double>(mirror.n_nucleons) * model.duration_s;
    const std::int64_t n_hits = rng::poisson(gen, mean_hits);

    GrwTrajectoryResult result;
    result.state = psi;
    result.n_hits = static_cast<int>(n_hits);
    if (n_hits == 0) {
        return result;
    }

    const int dim = psi.dim;
    const Eigen::MatrixXd& v = basis.vectors;
    // Work in the position eigenbasis: a collapse is then elementwise, so a
    // trajectory costs two basis changes total plus O(dim) per hit.
    Eigen::VectorXcd sym = real_times_complex(v.transpose(), psi.amp_sym);
    Eigen::VectorXcd asym = real_times_complex(v.transpose(), psi.amp_asym);
    const double inv_two_w2 = 1.0 / (2.0 * model.width_m * model.width_m);

    Eigen::VectorXd weights(dim);
    Eigen::VectorXcd gauss(dim);
    for (std::int64_t hit = 0; hit < n_hits; ++hit) {
        weights = sym.cwiseAbs2() + asym.cwiseAbs2();
        const double total = weights.sum();
        int resamples = 0;
        for (;;) {
            // Center index from the current position distribution.
            const double u = rng::canonical(gen) * total;
            double acc = 0.0;
            int idx = dim - 1;
            for (int i = 0; i < dim; ++i) {
                acc += weights(i);
                if (u < acc) {
                    idx = i;
                    break;
                }
            }
            const double center = basis.x_m(idx);
            for (int i = 0; i < dim; ++i) {
                const double d = basis.x_m(i) - center;
                gauss(i) = std::exp(-d * d * inv_two_w2);
            }
            const Eigen::VectorXcd new_sym = gauss.cwiseProduct(sym);
            const Eigen::VectorXcd new_asym = gauss.cwiseProduct(asym);
            const double norm_sq = new_sym.squaredNorm() + new_asym.squaredNorm();
            if (norm_sq > kZeroNormSq) {
                const double inv = 1.0 / std::sqrt(norm_sq);
                sym = inv * new_sym;
                asym = inv * new_asym;
                break;
            }
            ++resamples;
            ++result.n_resamples;
            if (resamples > kMaxResamples) {
                throw ConvergenceError(
                    "grw_trajectory: collapse annihilated the state repeatedly");
            }
        }
    }

    result.state.amp_sym = real_times_complex(v, sym);
    result.state.amp_asym = real_times_complex(v, asym);
    return result;
}

GrwTrajectoryResult grw_trajectory(const scattering::JointState& psi,
                                   const thermal::MirrorParams& mirror,
                                   const DecoherenceModel& model,
                                   std::uint64_t rng_seed) {
    const PositionBasis basis = PositionBasis::build(psi.dim, mirror.x_zpf());
    return grw_trajectory(psi, basis, mirror, model, rng_seed);
}

GrwAverageResult grw_average(const scattering::JointState& psi,
                             const thermal::MirrorParams& mirror,
                             const DecoherenceModel& model, int n_trajectories,
                             std::uint64_t seed, int threads) {
    if (n_trajectories < 1) {
        throw InvalidArgumentError("grw_average: n_trajectories must be >= 1");
    }
    const PositionBasis basis = PositionBasis::build(psi.dim, mirror.x_zpf());

    struct Partial {
        Eigen::MatrixXcd rho;
        std::int64_t hits = 0;
        std::int64_t resamples = 0;
    };
    Partial total = parallel::reduce<Partial>(
        0, n_trajectories, /*leaf_size=*/32, threads,
        [&](std::int64_t lo, std::int64_t hi) {
            Partial p{Eigen::MatrixXcd::Zero(2 * psi.dim, 2 * psi.dim), 0, 0};
            Eigen::VectorXcd joint(2 * psi.dim);
            for (std::int64_t i = lo; i < hi; ++i) {
                const GrwTrajectoryResult traj =
                    grw_trajectory(psi, basis, mirror, model,
                                   rng::mix_seed(seed, static_cast<std::uint64_t>(i)));
                joint.head(psi.dim) = traj.state.amp_sym;
                joint.tail(psi.dim) = traj.state.amp_asym;
                p.rho.noalias() += joint * joint.adjoint();
                p.hits += traj.n_hits;
                p.resamples += traj.n_resamples;
            }
            return p;
        },
        [](Partial a, Partial b) {
            a.rho += b.rho;
            a.hits += b.hits;
            a.resamples += b.resamples;
            return a;
        });

    GrwAverageResult result;
    result.rho = total.rho / static_cast<double>(n_trajectories);
    result.total_hits = total.hits;
    result.total_resamples = total.resamples;
    return result;
}

}  // namespace mparity::decoherence
