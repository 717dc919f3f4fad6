#include "mparity/fock.hpp"

#include <cmath>
#include <string>

namespace mparity::fock {

namespace {

void require_dim(int dim, const char* who) {
    if (dim < 1) {
        throw InvalidArgumentError(std::string(who) + ": dim must be >= 1, got " +
                                   std::to_string(dim));
    }
}

/// L(k, d) = L_k^{(d)}(x) for 0 <= k < dim, 0 <= d < dim, by the three-term
/// recurrence in k at fixed upper index d.
Eigen::MatrixXd laguerre_table(int dim, double x) {
    Eigen::MatrixXd L(dim, dim);
    for (int d = 0; d < dim; ++d) {
        L(0, d) = 1.0;
        if (dim > 1) L(1, d) = 1.0 + d - x;
        for (int k = 1; k + 1 < dim; ++k) {
            L(k + 1, d) =
                ((2.0 * k + 1.0 + d - x) * L(k, d) - (k + d) * L(k - 1, d)) / (k + 1.0);
        }
    }
    return L;
}

/// Magnitude factor sqrt(min! / max!) |alpha|^d e^{-|alpha|^2 / 2} evaluated in
/// log space: k is the smaller index, d = |m - n|, x = |alpha|^2.
double log_weight(int k, int d, double log_abs_alpha, double x) {
    return 0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + d + 1.0)) + d * log_abs_alpha -
           0.5 * x;
}

}  // namespace

LambDicke::LambDicke(double v) : value(v) {
    if (!(std::isfinite(v) && v > 0.0)) {
        throw InvalidArgumentError("LambDicke: eta must be finite and > 0, got " +
                                   std::to_string(v));
    }
}

FockOperator ladder_lowering(int dim) {
    require_dim(dim, "ladder_lowering");
    FockOperator op{dim, Eigen::MatrixXcd::Zero(dim, dim), default_trunc_tol};
    for (int n = 1; n < dim; ++n) {
        op.entries(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return op;
}

FockOperator displacement(std::complex<double> alpha, int dim) {
    require_dim(dim, "displacement");
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw InvalidArgumentError("displacement: alpha must be finite");
    }
    FockOperator op{dim, Eigen::MatrixXcd::Zero(dim, dim), default_trunc_tol};
    const double x = std::norm(alpha);
    if (x == 0.0) {
        op.entries.setIdentity();
        return op;
    }
    const double log_abs_alpha = std::log(std::abs(alpha));
    const std::complex<double> u = alpha / std::abs(alpha);
    const Eigen::MatrixXd L = laguerre_table(dim, x);

    // Phase ladders: u^d for the upper triangle in m (m > n), (-conj(u))^d for
    // m < n, both grown multiplicatively to avoid pow() in the inner loop.
    std::complex<double> up = 1.0;
    std::complex<double> down = 1.0;
    for (int d = 0; d < dim; ++d) {
        for (int k = 0; k + d < dim; ++k) {
            const double mag = std::exp(log_weight(k, d, log_abs_alpha, x)) * L(k, d);
            op.entries(k + d, k) = up * mag;    // m = k + d >= n = k
            if (d > 0) {
                op.entries(k, k + d) = down * mag;  // m = k < n = k + d
            }
        }
        up *= u;
        down *= -std::conj(u);
    }
    return op;
}

namespace {

/// Shared kernel for cos(k dx) and sin(k dx).  Since k dx = eta (a + a^dag),
/// exp(i k dx) = D(i eta), whose matrix elements are real times i^d with
/// d = |m - n|.  The cosine keeps even d with sign (-1)^(d/2); the sine keeps
/// odd d with sign (-1)^((d-1)/2).  Entries of the excluded parity are never
/// written, so the selection rules hold exactly, not just to round-off.
FockOperator trig_kx(LambDicke eta, int dim, bool even, const char* who) {
    require_dim(dim, who);
    FockOperator op{dim, Eigen::MatrixXcd::Zero(dim, dim), default_trunc_tol};
    const double x = eta.value * eta.value;
    const double log_abs_alpha = std::log(eta.value);
    const Eigen::MatrixXd L = laguerre_table(dim, x);
    for (int d = even ? 0 : 1; d < dim; d += 2) {
        const double sign = even ? ((d % 4 == 0) ? 1.0 : -1.0)
                                 : (((d - 1) / 2) % 2 == 0 ? 1.0 : -1.0);
        for (int k = 0; k + d < dim; ++k) {
            const double value =
                sign * std::exp(log_weight(k, d, log_abs_alpha, x)) * L(k, d);
            op.entries(k + d, k) = value;
            op.entries(k, k + d) = value;
        }
    }
    return op;
}

}  // namespace

FockOperator cos_kx(LambDicke eta, int dim) { return trig_kx(eta, dim, true, "cos_kx"); }

FockOperator sin_kx(LambDicke eta, int dim) { return trig_kx(eta, dim, false, "sin_kx"); }

FockOperator parity_operator(int dim) {
    require_dim(dim, "parity_operator");
    FockOperator op{dim, Eigen::MatrixXcd::Zero(dim, dim), default_trunc_tol};
    for (int n = 0; n < dim; ++n) {
        op.entries(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    }
    return op;
}

double column_deficit(const FockOperator& op, int n) {
    if (n < 0 || n >= op.dim) {
        throw InvalidArgumentError("column_deficit: level " + std::to_string(n) +
                                   " outside basis of dim " + std::to_string(op.dim));
    }
    return 1.0 - op.entries.col(n).squaredNorm();
}

}  // namespace mparity::fock
