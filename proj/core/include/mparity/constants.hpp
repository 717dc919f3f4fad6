#pragma once

namespace mparity::constants {

// CODATA 2018 values, SI units throughout.
inline constexpr double hbar = 1.054571817e-34;        // J s (reduced Planck)
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K (exact)
inline constexpr double c_light = 299792458.0;         // m/s (exact)
inline constexpr double nucleon_mass = 1.67262192369e-27;  // kg (proton mass)

inline constexpr double pi = 3.14159265358979323846;

}  // namespace mparity::constants
