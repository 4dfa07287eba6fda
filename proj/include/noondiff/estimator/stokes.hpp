#pragma once

namespace noondiff::estimator {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

struct StokesEinsteinInput {
    double temperature = 0.0;    // K
    double viscosity = 0.0;      // Pa s
    double stokes_radius = 0.0;  // m
    double boltzmann = kBoltzmann;

    // Throws std::invalid_argument unless every field is positive and finite;
    // the radius may be infinite (D = 0).
    void validate() const;
};

// 6 pi eta r_s, the Stokes friction coefficient, kg/s.
double friction_coefficient(const StokesEinsteinInput& input);

// D = k T / (6 pi eta r_s), m^2/s.
double stokes_einstein(const StokesEinsteinInput& input);

}  // namespace noondiff::estimator
