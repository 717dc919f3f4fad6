#include <cmath>

#include <doctest.h>

#include "mparity/constants.hpp"
#include "mparity/thermal.hpp"

using namespace mparity;

namespace {

thermal::MirrorParams params_at(double temperature_factor) {
    // temperature_factor = k_B T / (hbar omega).
    const double omega = 2.0 * constants::pi * 1e5;
    const double temperature =
        temperature_factor * constants::hbar * omega / constants::k_boltzmann;
    return thermal::MirrorParams::from_nucleons(1000000000, omega, temperature);
}

}  // namespace

TEST_CASE("mirror parameters from a nucleon count") {
    const auto p = thermal::MirrorParams::from_nucleons(1000000000, 2.0e5, 0.001);
    CHECK(p.mass_kg == doctest::Approx(1.67262192369e-18));
    CHECK(p.n_nucleons == 1000000000);
    // x_zpf = sqrt(hbar / (2 m omega)).
    const double expected =
        std::sqrt(constants::hbar / (2.0 * p.mass_kg * p.omega_rad_s));
    CHECK(p.x_zpf() == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("zero temperature collapses to the ground level") {
    const auto ens = thermal::boltzmann_ensemble(params_at(0.0));
    CHECK(ens.dim == 1);
    REQUIRE(ens.levels.size() == 1);
    CHECK(ens.levels[0].first == 0);
    CHECK(ens.levels[0].second == 1.0);
}

TEST_CASE("weights are geometric with ratio e^{-hbar omega / k T}") {
    const auto ens = thermal::boltzmann_ensemble(params_at(1.0));
    REQUIRE(ens.dim > 3);
    // Frozen value: at k_B T = hbar omega the ratio is e^{-1}.
    const double r = 0.36787944117144233;
    for (int n = 0; n + 1 < ens.dim; ++n) {
        CHECK(std::abs(ens.levels[n + 1].second / ens.levels[n].second - r) < 1e-12);
    }
}

TEST_CASE("weights are normalized and the truncation rule holds") {
    for (const double tf : {0.3, 1.0, 5.0}) {
        CAPTURE(tf);
        for (const double tail : {1e-6, 1e-10, 1e-12}) {
            CAPTURE(tail);
            const auto ens = thermal::boltzmann_ensemble(params_at(tf), tail);
            double sum = 0.0;
            for (const auto& [n, w] : ens.levels) {
                CHECK(w > 0.0);
                sum += w;
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
            // dim is the smallest N with r^N < tail.
            const double r = std::exp(-1.0 / tf);
            CHECK(std::pow(r, ens.dim) < tail);
            CHECK(std::pow(r, ens.dim - 1) >= tail);
        }
    }
}

TEST_CASE("truncated mean occupation approaches Bose-Einstein") {
    for (const double tf : {0.5, 1.0, 5.0}) {
        CAPTURE(tf);
        const auto params = params_at(tf);
        const double tail = 1e-10;
        const auto ens = thermal::boltzmann_ensemble(params, tail);
        double mean = 0.0;
        for (const auto& [n, w] : ens.levels) mean += n * w;
        const double bose = thermal::bose_einstein_mean(params);
        CHECK(std::abs(mean - bose) < tail * ens.dim);
    }
}

TEST_CASE("higher temperature keeps more levels") {
    const auto cold = thermal::boltzmann_ensemble(params_at(0.5));
    const auto warm = thermal::boltzmann_ensemble(params_at(5.0));
    CHECK(warm.dim > cold.dim);
    CHECK(warm.top_level() == warm.dim - 1);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(thermal::MirrorParams::from_nucleons(0, 1e5, 0.0),
                    InvalidArgumentError);
    CHECK_THROWS_AS(thermal::MirrorParams::from_nucleons(10, -1.0, 0.0),
                    InvalidArgumentError);
    CHECK_THROWS_AS(thermal::MirrorParams::from_nucleons(10, 1e5, -0.1),
                    InvalidArgumentError);
    const auto good = params_at(1.0);
    CHECK_THROWS_AS(thermal::boltzmann_ensemble(good, 0.0), InvalidArgumentError);
    CHECK_THROWS_AS(thermal::boltzmann_ensemble(good, 1.5), InvalidArgumentError);
}
