#include "support/oracles.hpp"

#include <cmath>

namespace oracles {

Eigen::MatrixXcd displacement_expm(std::complex<double> alpha, int dim) {
    Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const double s = std::sqrt(static_cast<double>(n));
        generator(n, n - 1) = alpha * s;              // alpha a^dag
        generator(n - 1, n) = -std::conj(alpha) * s;  // -alpha^* a
    }
    // The generator is anti-Hermitian, so H = i G is Hermitian and
    // exp(G) = exp(-i H) = V exp(-i diag) V^dag.
    const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * generator;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    Eigen::VectorXcd phases(dim);
    for (int k = 0; k < dim; ++k) {
        phases(k) = std::exp(std::complex<double>(0.0, -solver.eigenvalues()(k)));
    }
    return solver.eigenvectors() * phases.asDiagonal() *
           solver.eigenvectors().adjoint();
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXcd b = a * scale;
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = (term * b) / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) {
        sum = sum * sum;
    }
    return sum;
}

double ground_state_cos_quadrature(double eta, int panels) {
    const double half_width = 12.0 + 8.0 * std::abs(eta);
    const double h = 2.0 * half_width / panels;
    const double inv_sqrt_2pi = 0.3989422804014327;
    auto f = [&](double xi) {
        return std::cos(eta * xi) * inv_sqrt_2pi * std::exp(-0.5 * xi * xi);
    };
    double sum = f(-half_width) + f(half_width);
    for (int i = 1; i < panels; ++i) {
        const double xi = -half_width + i * h;
        sum += f(xi) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

Eigen::MatrixXcd localization_superoperator(int dim, double omega, double lambda,
                                            double x_zpf) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const double v = x_zpf * std::sqrt(static_cast<double>(n));
        x(n - 1, n) = v;
        x(n, n - 1) = v;
    }
    Eigen::MatrixXd number = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) number(n, n) = n;
    const Eigen::MatrixXd x2 = x * x;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);

    auto kron = [dim](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        Eigen::MatrixXd out(dim * dim, dim * dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                out.block(i * dim, j * dim, dim, dim) = a(i, j) * b;
            }
        }
        return out;
    };

    // Column-stacking convention: vec(A rho B) = (B^T (x) A) vec(rho).
    const Eigen::MatrixXd commutator_n = kron(id, number) - kron(number, id);
    const Eigen::MatrixXd dissipator =
        kron(id, x2) + kron(x2, id) - 2.0 * kron(x, x);
    return std::complex<double>(0.0, -omega) * commutator_n.cast<std::complex<double>>() -
           lambda * dissipator.cast<std::complex<double>>();
}

}  // namespace oracles
