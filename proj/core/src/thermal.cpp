#include "mparity/thermal.hpp"

#include <cmath>
#include <string>

#include "mparity/constants.hpp"

namespace mparity::thermal {

namespace {

void validate(const MirrorParams& p) {
    if (!(std::isfinite(p.mass_kg) && p.mass_kg > 0.0)) {
        throw InvalidArgumentError("MirrorParams: mass must be finite and > 0");
    }
    if (!(std::isfinite(p.omega_rad_s) && p.omega_rad_s > 0.0)) {
        throw InvalidArgumentError("MirrorParams: omega must be finite and > 0");
    }
    if (!(std::isfinite(p.temperature_K) && p.temperature_K >= 0.0)) {
        throw InvalidArgumentError("MirrorParams: temperature must be finite and >= 0");
    }
}

}  // namespace

MirrorParams MirrorParams::from_nucleons(std::int64_t n_nucleons, double omega_rad_s,
                                         double temperature_K) {
    if (n_nucleons < 1) {
        throw InvalidArgumentError("MirrorParams: n_nucleons must be >= 1, got " +
                                   std::to_string(n_nucleons));
    }
    MirrorParams p;
    p.mass_kg = static_cast<double>(n_nucleons) * constants::nucleon_mass;
    p.omega_rad_s = omega_rad_s;
    p.temperature_K = temperature_K;
    p.n_nucleons = n_nucleons;
    validate(p);
    return p;
}

double MirrorParams::x_zpf() const {
    validate(*this);
    return std::sqrt(constants::hbar / (2.0 * mass_kg * omega_rad_s));
}

MirrorEnsemble boltzmann_ensemble(const MirrorParams& params, double tail_tol) {
    validate(params);
    if (!(std::isfinite(tail_tol) && tail_tol > 0.0 && tail_tol < 1.0)) {
        throw InvalidArgumentError("boltzmann_ensemble: tail_tol must lie in (0, 1)");
    }
    MirrorEnsemble ens;
    ens.params = params;
    if (params.temperature_K == 0.0) {
        ens.levels = {{0, 1.0}};
        ens.dim = 1;
        return ens;
    }
    const double beta_hw =
        constants::hbar * params.omega_rad_s / (constants::k_boltzmann * params.temperature_K);
    const double r = std::exp(-beta_hw);
    if (!(r < 1.0)) {
        // Only reachable through overflow-scale inputs; r == 1 would need
        // infinitely many levels.
        throw InvalidArgumentError("boltzmann_ensemble: geometric ratio not < 1");
    }
    // Smallest N with r^N < tail_tol.
    int dim = 1;
    double rn = r;
    while (rn >= tail_tol) {
        rn *= r;
        ++dim;
        if (dim > 1000000) {
            throw InvalidArgumentError(
                "boltzmann_ensemble: more than 1e6 levels required; raise tail_tol or "
                "lower the temperature");
        }
    }
    ens.dim = dim;
    ens.levels.reserve(dim);
    // Renormalize the truncated geometric series so the retained weights sum
    // to one exactly (finite-sum normalization 1 - r^dim).
    const double norm = (1.0 - r) / (1.0 - std::pow(r, dim));
    double w = norm;
    for (int n = 0; n < dim; ++n) {
        ens.levels.emplace_back(n, w);
        w *= r;
    }
    return ens;
}

double bose_einstein_mean(const MirrorParams& params) {
    validate(params);
    if (params.temperature_K == 0.0) return 0.0;
    const double beta_hw =
        constants::hbar * params.omega_rad_s / (constants::k_boltzmann * params.temperature_K);
    return 1.0 / std::expm1(beta_hw);
}

}  // namespace mparity::thermal
