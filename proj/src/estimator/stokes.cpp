#include "noondiff/estimator/stokes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace noondiff::estimator {

void StokesEinsteinInput::validate() const {
    const auto ok = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!ok(temperature)) {
        throw std::invalid_argument("temperature must be positive");
    }
    if (!ok(viscosity)) {
        throw std::invalid_argument("viscosity must be positive");
    }
    if (!(stokes_radius > 0.0)) {
        throw std::invalid_argument("Stokes radius must be positive");
    }
    if (!ok(boltzmann)) {
        throw std::invalid_argument("Boltzmann constant must be positive");
    }
}

double friction_coefficient(const StokesEinsteinInput& input) {
    input.validate();
    return 6.0 * std::numbers::pi * input.viscosity * input.stokes_radius;
}

double stokes_einstein(const StokesEinsteinInput& input) {
    return input.boltzmann * input.temperature / friction_coefficient(input);
}

}  // namespace noondiff::estimator
