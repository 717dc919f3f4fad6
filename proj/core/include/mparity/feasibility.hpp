#pragma once

#include <cstdint>
#include <vector>

namespace mparity::feasibility {

/// Photon energy E_p = 2 pi hbar c / lambda, joules.
double photon_energy(double lambda_m);

/// Trap frequency that realizes a requested Lamb-Dicke coupling at a given
/// wavelength and mirror mass:  eta = (4 pi / lambda) x_zpf (g / 2)  with
/// geometry factor g (g = 2 is perfect back-reflection), so
///   omega = 2 pi^2 g^2 hbar / (m eta^2 lambda^2).
double omega_from_eta(double eta, double lambda_m, double mass_kg,
                      double geometry_factor = 2.0);

/// Inverse of omega_from_eta at fixed mass and wavelength.
double eta_from_omega(double omega_rad_s, double lambda_m, double mass_kg,
                      double geometry_factor = 2.0);

/// Relative energy resolution needed to see one mirror quantum on the photon:
/// hbar omega / E_p = omega lambda / (2 pi c).
double resolution_ratio(double omega_rad_s, double lambda_m);

struct FeasibilityPoint {
    std::int64_t n_nucleons = 0;
    double lambda_m = 0.0;
    double eta = 0.0;
    double omega_rad_s = 0.0;
    double resolution_ratio = 0.0;
};

/// Required relative resolution versus mirror size at fixed wavelength and
/// coupling.  n_nucleons must be nonempty and strictly increasing.
std::vector<FeasibilityPoint> resolution_curve(const std::vector<std::int64_t>& n_nucleons,
                                               double lambda_m, double eta,
                                               double geometry_factor = 2.0);

/// Mirror size (a real nucleon count) whose required relative resolution
/// equals target_ratio:  N = pi g^2 hbar / (m_nucleon eta^2 lambda c target).
double nucleons_for_resolution(double target_ratio, double lambda_m, double eta,
                               double geometry_factor = 2.0);

}  // namespace mparity::feasibility
