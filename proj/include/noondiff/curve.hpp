#pragma once

#include <optional>
#include <vector>

namespace noondiff {

struct CurvePoint {
    double g = 0.0;  // T/m
    double s = 0.0;  // normalised signal
    std::optional<double> sigma;
};

// Attenuation samples with the encoding parameters needed to turn G into b.
struct AttenuationCurve {
    std::vector<CurvePoint> points;
    double little_delta = 0.0;  // s, effective gradient duration
    double big_delta = 0.0;     // s, onset-to-onset separation
    double q_gamma = 0.0;       // rad s^-1 T^-1

    // Throws std::invalid_argument on negative or repeated g, or non-finite s.
    void validate() const;
    bool has_sigma() const;
};

// Evenly spaced gradient list 0 .. g_max with n points.
std::vector<double> gradient_sweep(double g_max, int n_points);

}  // namespace noondiff
