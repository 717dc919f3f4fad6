#include <cmath>
#include <complex>

#include <doctest.h>

#include "mparity/fock.hpp"
#include "support/oracles.hpp"

using namespace mparity;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("ladder operator matrix elements") {
    const auto a = fock::ladder_lowering(6);
    CHECK(a.dim == 6);
    CHECK(a.entries(0, 1).real() == doctest::Approx(1.0));
    CHECK(a.entries(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(a.entries(4, 5).real() == doctest::Approx(std::sqrt(5.0)));
    // a a^dag - a^dag a = 1 away from the truncation corner.
    const Eigen::MatrixXcd comm = a.entries * a.entries.adjoint() -
                                  a.entries.adjoint() * a.entries;
    for (int n = 0; n < 5; ++n) {
        CHECK(std::abs(comm(n, n) - 1.0) < 1e-14);
    }
}

TEST_CASE("displacement ground matrix element matches the frozen closed form") {
    // <0|D(0.3 i)|0> = e^{-0.045}, pinned against the matrix-exponential
    // oracle when this suite was written.
    const auto d = fock::displacement(std::complex<double>(0.0, 0.3), 24);
    CHECK(std::abs(d.entries(0, 0) - std::complex<double>(0.9559974818330998, 0.0)) <
          1e-12);
}

TEST_CASE("displacement agrees with the matrix-exponential oracle") {
    const int dim = 40;
    const std::complex<double> alphas[] = {{0.3, 0.0}, {0.0, 0.45}, {-0.2, 0.7}, {1.1, -0.4}};
    for (const auto alpha : alphas) {
        CAPTURE(alpha.real());
        CAPTURE(alpha.imag());
        const auto d = fock::displacement(alpha, dim);
        const Eigen::MatrixXcd reference = oracles::displacement_expm(alpha, 2 * dim);
        // Interior block: the closed form is truncation-free there, while the
        // oracle needs headroom, hence the doubled oracle basis.
        const double err = (d.entries.topLeftCorner(dim / 2, dim / 2) -
                            reference.topLeftCorner(dim / 2, dim / 2))
                               .cwiseAbs()
                               .maxCoeff();
        CHECK(err < 1e-8);
    }
}

TEST_CASE("displacement is unitary on the interior and identity at alpha = 0") {
    const auto id = fock::displacement(0.0, 8);
    CHECK(max_abs(id.entries - Eigen::MatrixXcd::Identity(8, 8)) == 0.0);

    const auto d = fock::displacement(std::complex<double>(0.2, 0.5), 48);
    const Eigen::MatrixXcd gram = d.entries.adjoint() * d.entries;
    const double err = (gram.topLeftCorner(24, 24) -
                        Eigen::MatrixXcd::Identity(24, 24))
                           .cwiseAbs()
                           .maxCoeff();
    CHECK(err < 1e-10);
}

TEST_CASE("cos and sin obey the exact parity selection rules") {
    const fock::LambDicke eta(0.5);
    const int dim = 60;
    const auto c = fock::cos_kx(eta, dim);
    const auto s = fock::sin_kx(eta, dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            if ((m - n) % 2 != 0) {
                CHECK(c.entries(m, n) == std::complex<double>(0.0, 0.0));
            } else {
                CHECK(s.entries(m, n) == std::complex<double>(0.0, 0.0));
            }
        }
    }
}

TEST_CASE("cos and sin are real symmetric and reproduce e^{i k x} = D(i eta)") {
    const fock::LambDicke eta(0.7);
    const int dim = 36;
    const auto c = fock::cos_kx(eta, dim);
    const auto s = fock::sin_kx(eta, dim);
    CHECK(max_abs(c.entries - c.entries.transpose()) == 0.0);
    CHECK(max_abs(s.entries - s.entries.transpose()) == 0.0);
    CHECK(c.entries.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.entries.imag().cwiseAbs().maxCoeff() == 0.0);

    const auto d = fock::displacement(std::complex<double>(0.0, eta.value), dim);
    CHECK(max_abs(c.entries + std::complex<double>(0.0, 1.0) * s.entries - d.entries) <
          1e-13);
}

TEST_CASE("cos^2 + sin^2 = 1 on the interior") {
    const fock::LambDicke eta(0.5);
    const int dim = 40;
    const auto c = fock::cos_kx(eta, dim);
    const auto s = fock::sin_kx(eta, dim);
    const Eigen::MatrixXcd sum = c.entries * c.entries + s.entries * s.entries;
    const double err = (sum.topLeftCorner(dim / 2, dim / 2) -
                        Eigen::MatrixXcd::Identity(dim / 2, dim / 2))
                           .cwiseAbs()
                           .maxCoeff();
    CHECK(err < 1e-8);
}

TEST_CASE("parity commutes with cos and anticommutes with sin") {
    const fock::LambDicke eta(0.9);
    const int dim = 30;
    const auto p = fock::parity_operator(dim);
    const auto c = fock::cos_kx(eta, dim);
    const auto s = fock::sin_kx(eta, dim);
    CHECK(max_abs(p.entries * c.entries - c.entries * p.entries) < 1e-12);
    CHECK(max_abs(p.entries * s.entries + s.entries * p.entries) < 1e-12);
}

TEST_CASE("ground-state cosine matches quadrature and the closed form") {
    for (const double eta : {0.1, 0.5, 1.0}) {
        CAPTURE(eta);
        const auto c = fock::cos_kx(fock::LambDicke(eta), 32);
        const double quadrature = oracles::ground_state_cos_quadrature(eta);
        CHECK(std::abs(c.entries(0, 0).real() - quadrature) < 1e-10);
        CHECK(std::abs(c.entries(0, 0).real() - std::exp(-eta * eta / 2.0)) < 1e-12);
    }
    // Frozen spot value at eta = 0.5: e^{-0.125}.
    const auto c = fock::cos_kx(fock::LambDicke(0.5), 16);
    CHECK(std::abs(c.entries(0, 0).real() - 0.8824969025845955) < 1e-12);
}

TEST_CASE("entries are independent of the basis size") {
    const fock::LambDicke eta(0.8);
    const auto small = fock::cos_kx(eta, 12);
    const auto big = fock::cos_kx(eta, 48);
    CHECK(max_abs(big.entries.topLeftCorner(12, 12) - small.entries) == 0.0);

    const auto ds = fock::displacement(std::complex<double>(0.4, -0.3), 10);
    const auto db = fock::displacement(std::complex<double>(0.4, -0.3), 40);
    CHECK(max_abs(db.entries.topLeftCorner(10, 10) - ds.entries) == 0.0);
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(fock::LambDicke(0.0), InvalidArgumentError);
    CHECK_THROWS_AS(fock::LambDicke(-1.0), InvalidArgumentError);
    CHECK_THROWS_AS(fock::displacement(0.3, 0), InvalidArgumentError);
    CHECK_THROWS_AS(
        fock::displacement(std::complex<double>(std::nan(""), 0.0), 8),
        InvalidArgumentError);
    CHECK_THROWS_AS(fock::column_deficit(fock::parity_operator(4), 7),
                    InvalidArgumentError);
}

TEST_CASE("column deficit reflects the weight above the truncation edge") {
    const fock::LambDicke eta(1.0);
    const auto c = fock::cos_kx(eta, 64);
    const auto s = fock::sin_kx(eta, 64);
    // For a unitary split into even and odd parts the deficits add to the
    // total lost norm, which is tiny for the ground state at this size.
    const double deficit =
        fock::column_deficit(c, 0) + fock::column_deficit(s, 0) - 1.0;
    CHECK(std::abs(deficit) < 1e-12);
}
