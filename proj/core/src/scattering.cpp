#include "mparity/scattering.hpp"

#include <cmath>
#include <string>

namespace mparity::scattering {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

ScatterOperators make_scatter_operators(fock::LambDicke eta, int dim, int pad,
                                        double trunc_tol) {
    if (dim < 1) {
        throw InvalidArgumentError("make_scatter_operators: dim must be >= 1");
    }
    if (pad < 0) {
        throw InvalidArgumentError("make_scatter_operators: pad must be >= 0");
    }
    if (!(std::isfinite(trunc_tol) && trunc_tol > 0.0)) {
        throw InvalidArgumentError("make_scatter_operators: trunc_tol must be > 0");
    }
    ScatterOperators ops{eta, dim, pad, trunc_tol, fock::cos_kx(eta, dim),
                         fock::sin_kx(eta, dim)};
    ops.cos_op.trunc_tol = trunc_tol;
    ops.sin_op.trunc_tol = trunc_tol;
    return ops;
}

Eigen::MatrixXcd JointState::density_matrix() const {
    Eigen::VectorXcd psi(2 * dim);
    psi.head(dim) = amp_sym;
    psi.tail(dim) = amp_asym;
    return psi * psi.adjoint();
}

JointState scatter(int n, const ScatterOperators& ops) {
    if (n < 0 || n >= ops.dim) {
        throw InvalidArgumentError("scatter: level " + std::to_string(n) +
                                   " outside basis of dim " + std::to_string(ops.dim));
    }
    if (n >= ops.dim - ops.pad) {
        throw TruncationError(
            "scatter: level " + std::to_string(n) + " violates the headroom rule n < dim - pad (dim " +
                std::to_string(ops.dim) + ", pad " + std::to_string(ops.pad) + ")",
            choose_mirror_dim(n, ops.eta, ops.pad, ops.trunc_tol));
    }
    JointState st;
    st.dim = ops.dim;
    st.level = n;
    st.amp_sym = ops.cos_op.entries.col(n);
    st.amp_asym = kI * ops.sin_op.entries.col(n);
    st.norm_deficit = 1.0 - st.norm_squared();
    if (st.norm_deficit > ops.trunc_tol) {
        throw TruncationError(
            "scatter: level " + std::to_string(n) + " loses norm " +
                std::to_string(st.norm_deficit) + " above the truncation edge (tol " +
                std::to_string(ops.trunc_tol) + ")",
            choose_mirror_dim(n, ops.eta, ops.pad, ops.trunc_tol));
    }
    return st;
}

TransitionProbabilities transition_probabilities(int n, const ScatterOperators& ops) {
    const JointState st = scatter(n, ops);
    return {st.amp_sym.cwiseAbs2(), st.amp_asym.cwiseAbs2()};
}

double elastic_probability(int n, const ScatterOperators& ops) {
    const JointState st = scatter(n, ops);
    return std::norm(st.amp_sym(n)) + std::norm(st.amp_asym(n));
}

double debye_waller_factor(fock::LambDicke eta) {
    return std::exp(-eta.value * eta.value);
}

int choose_mirror_dim(int n_max, fock::LambDicke eta, int pad, double trunc_tol) {
    if (n_max < 0) {
        throw InvalidArgumentError("choose_mirror_dim: n_max must be >= 0");
    }
    if (pad < 0) {
        throw InvalidArgumentError("choose_mirror_dim: pad must be >= 0");
    }
    const int floor_dim = n_max + pad + 1;
    const double target = 0.5 * trunc_tol;
    int big = floor_dim + std::max(pad, 20);
    for (int iter = 0; iter < 24; ++iter) {
        const fock::FockOperator c = fock::cos_kx(eta, big);
        const fock::FockOperator s = fock::sin_kx(eta, big);
        // Closed-form entries do not change with basis size, so the deficit at
        // any dim M <= big is one minus a prefix sum of this column's weights.
        const Eigen::VectorXd w =
            c.entries.col(n_max).cwiseAbs2() + s.entries.col(n_max).cwiseAbs2();
        if (1.0 - w.sum() <= target) {
            double tail = 1.0 - w.sum();
            int m = big;
            while (m > floor_dim && tail + w(m - 1) <= target) {
                tail += w(m - 1);
                --m;
            }
            return m;
        }
        big *= 2;
    }
    throw TruncationError(
        "choose_mirror_dim: no basis size up to " + std::to_string(big) +
            " meets the truncation tolerance for level " + std::to_string(n_max),
        big);
}

Eigen::MatrixXcd joint_density_matrix(const thermal::MirrorEnsemble& ensemble,
                                      const ScatterOperators& ops) {
    if (ensemble.dim < 1) {
        throw InvalidArgumentError("joint_density_matrix: empty ensemble");
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2 * ops.dim, 2 * ops.dim);
    for (const auto& [n, weight] : ensemble.levels) {
        rho.noalias() += weight * scatter(n, ops).density_matrix();
    }
    return rho;
}

}  // namespace mparity::scattering
