#pragma once

#include <complex>

#include <Eigen/Dense>

#include "mparity/errors.hpp"

namespace mparity::fock {

/// Default per-column truncation budget for operators built in a finite Fock
/// basis: the squared column norm lost to levels >= dim.
inline constexpr double default_trunc_tol = 1e-10;

/// Lamb-Dicke parameter eta = k * x_zpf (dimensionless coupling between the
/// photon momentum kick and the mirror zero-point motion).  Strong type so a
/// bare double cannot be confused with, say, a wavelength.
struct LambDicke {
    explicit LambDicke(double value);
    double value;
};

/// A dense operator on the truncated oscillator Hilbert space spanned by
/// number states |0>, ..., |dim-1>.
struct FockOperator {
    int dim = 0;
    Eigen::MatrixXcd entries;
    /// Truncation budget the operator was built against (see scattering for
    /// how realized column deficits are checked per initial level).
    double trunc_tol = default_trunc_tol;
};

/// Lowering operator a: a|n> = sqrt(n)|n-1>.
FockOperator ladder_lowering(int dim);

/// Displacement operator D(alpha) = exp(alpha a^dag - alpha^* a), assembled
/// from the closed-form matrix elements
///   <m|D|n> = sqrt(n!/m!) alpha^(m-n) e^(-|alpha|^2/2) L_n^(m-n)(|alpha|^2)
/// (m >= n; the m < n block follows from D(alpha)^dag = D(-alpha)).  The
/// associated-Laguerre evaluation runs the three-term recurrence in the lower
/// index with a log-space prefactor, which stays stable far beyond the basis
/// sizes used here.  Exact to round-off for every retained entry, so entries
/// never change when the basis is enlarged.
FockOperator displacement(std::complex<double> alpha, int dim);

/// cos(k dx) in the number basis, where k dx = eta (a + a^dag).  Real
/// symmetric; entries with |m - n| odd are exactly zero by parity selection.
FockOperator cos_kx(LambDicke eta, int dim);

/// sin(k dx) companion; entries with |m - n| even are exactly zero.
FockOperator sin_kx(LambDicke eta, int dim);

/// Photon-exchange parity P = diag((-1)^n).
FockOperator parity_operator(int dim);

/// Squared-norm deficit of column n: 1 - sum_m |entries(m, n)|^2.  For a
/// unitary this is exactly the weight pushed above the truncation edge.
double column_deficit(const FockOperator& op, int n);

}  // namespace mparity::fock
