#pragma once

#include <complex>

#include <Eigen/Dense>

#include "mparity/fock.hpp"
#include "mparity/thermal.hpp"

namespace mparity::scattering {

/// Detector branch labels.  The symmetric scattering branch feeds detector
/// D1, the antisymmetric branch feeds detector D2.
enum class Branch : int { sym = 0, asym = 1 };

/// Cached cos(k dx) / sin(k dx) pair at a fixed basis size, shared by every
/// scattering event at the same coupling.
struct ScatterOperators {
    fock::LambDicke eta;
    int dim = 0;
    /// Headroom above the highest initial level implied by the precondition
    /// n < dim - pad.
    int pad = 20;
    double trunc_tol = fock::default_trunc_tol;
    fock::FockOperator cos_op;
    fock::FockOperator sin_op;
};

ScatterOperators make_scatter_operators(fock::LambDicke eta, int dim, int pad = 20,
                                        double trunc_tol = fock::default_trunc_tol);

/// Pure joint photon-mirror state produced by scattering off a mirror number
/// state |n>:  |psi> = sum_m [ cos_mn |sym, m> + i sin_mn |asym, m> ].
/// The mirror-level vectors are stored per branch; the flattened joint index
/// convention is branch * dim + m.
struct JointState {
    int dim = 0;
    int level = 0;
    Eigen::VectorXcd amp_sym;
    Eigen::VectorXcd amp_asym;
    /// Norm lost above the truncation edge for this initial level (exactly
    /// 1 - |amp_sym|^2 - |amp_asym|^2 since the untruncated map is unitary).
    double norm_deficit = 0.0;

    double norm_squared() const {
        return amp_sym.squaredNorm() + amp_asym.squaredNorm();
    }

    /// Rank-one joint density matrix (2 dim x 2 dim) of this pure state.
    Eigen::MatrixXcd density_matrix() const;
};

/// Scatter a single photon off the mirror prepared in level n.  Throws a
/// truncation error carrying a sufficient-dimension hint whenever the basis
/// headroom or the realized norm deficit violates the operator's tolerance.
JointState scatter(int n, const ScatterOperators& ops);

/// Per-branch transition probabilities out of level n:
/// p_sym[m] = |cos_mn|^2, p_asym[m] = |sin_mn|^2.
struct TransitionProbabilities {
    Eigen::VectorXd sym;
    Eigen::VectorXd asym;
};
TransitionProbabilities transition_probabilities(int n, const ScatterOperators& ops);

/// Probability that the mirror level is unchanged (m = n), summed over both
/// branches.  For the ground state this is the Debye-Waller factor.
double elastic_probability(int n, const ScatterOperators& ops);

/// Closed-form Debye-Waller factor e^{-eta^2}.
double debye_waller_factor(fock::LambDicke eta);

/// Smallest basis size M >= n_max + pad + 1 whose realized column deficit at
/// level n_max stays within half the truncation tolerance.  Matrix elements
/// are basis-size independent (closed form), so the deficit can be read off a
/// single generously sized table.
int choose_mirror_dim(int n_max, fock::LambDicke eta, int pad = 20,
                      double trunc_tol = fock::default_trunc_tol);

/// Thermally averaged joint state: rho = sum_n l_n |psi_n><psi_n| over the
/// ensemble's retained levels, in the flattened branch * dim + m convention.
Eigen::MatrixXcd joint_density_matrix(const thermal::MirrorEnsemble& ensemble,
                                      const ScatterOperators& ops);

}  // namespace mparity::scattering
