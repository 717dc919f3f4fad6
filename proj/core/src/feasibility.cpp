#include "mparity/feasibility.hpp"

#include <cmath>
#include <string>

#include "mparity/constants.hpp"
#include "mparity/errors.hpp"

namespace mparity::feasibility {

namespace {

void require_positive(double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
        throw InvalidArgumentError(std::string("feasibility: ") + name +
                                   " must be finite and > 0");
    }
}

void require_geometry(double g) {
    if (!(std::isfinite(g) && g > 0.0 && g <= 2.0)) {
        throw InvalidArgumentError(
            "feasibility: geometry_factor must lie in (0, 2] (2 = back-reflection)");
    }
}

}  // namespace

double photon_energy(double lambda_m) {
    require_positive(lambda_m, "lambda_m");
    return 2.0 * constants::pi * constants::hbar * constants::c_light / lambda_m;
}

double omega_from_eta(double eta, double lambda_m, double mass_kg,
                      double geometry_factor) {
    require_positive(eta, "eta");
    require_positive(lambda_m, "lambda_m");
    require_positive(mass_kg, "mass_kg");
    require_geometry(geometry_factor);
    const double g = geometry_factor;
    return 2.0 * constants::pi * constants::pi * g * g * constants::hbar /
           (mass_kg * eta * eta * lambda_m * lambda_m);
}

double eta_from_omega(double omega_rad_s, double lambda_m, double mass_kg,
                      double geometry_factor) {
    require_positive(omega_rad_s, "omega_rad_s");
    require_positive(lambda_m, "lambda_m");
    require_positive(mass_kg, "mass_kg");
    require_geometry(geometry_factor);
    const double x_zpf = std::sqrt(constants::hbar / (2.0 * mass_kg * omega_rad_s));
    return (4.0 * constants::pi / lambda_m) * x_zpf * (geometry_factor / 2.0);
}

double resolution_ratio(double omega_rad_s, double lambda_m) {
    require_positive(omega_rad_s, "omega_rad_s");
    require_positive(lambda_m, "lambda_m");
    return omega_rad_s * lambda_m / (2.0 * constants::pi * constants::c_light);
}

std::vector<FeasibilityPoint> resolution_curve(const std::vector<std::int64_t>& n_nucleons,
                                               double lambda_m, double eta,
                                               double geometry_factor) {
    if (n_nucleons.empty()) {
        throw InvalidArgumentError("resolution_curve: nucleon list must be nonempty");
    }
    std::vector<FeasibilityPoint> curve;
    curve.reserve(n_nucleons.size());
    std::int64_t prev = 0;
    for (const std::int64_t n : n_nucleons) {
        if (n < 1) {
            throw InvalidArgumentError("resolution_curve: nucleon counts must be >= 1");
        }
        if (n <= prev) {
            throw InvalidArgumentError(
                "resolution_curve: nucleon counts must be strictly increasing");
        }
        prev = n;
        FeasibilityPoint p;
        p.n_nucleons = n;
        p.lambda_m = lambda_m;
        p.eta = eta;
        const double mass = static_cast<double>(n) * constants::nucleon_mass;
        p.omega_rad_s = omega_from_eta(eta, lambda_m, mass, geometry_factor);
        p.resolution_ratio = resolution_ratio(p.omega_rad_s, lambda_m);
        curve.push_back(p);
    }
    return curve;
}

double nucleons_for_resolution(double target_ratio, double lambda_m, double eta,
                               double geometry_factor) {
    require_positive(target_ratio, "target_ratio");
    require_positive(lambda_m, "lambda_m");
    require_positive(eta, "eta");
    require_geometry(geometry_factor);
    const double g = geometry_factor;
    return constants::pi * g * g * constants::hbar /
           (constants::nucleon_mass * eta * eta * lambda_m * constants::c_light *
            target_ratio);
}

}  // namespace mparity::feasibility
