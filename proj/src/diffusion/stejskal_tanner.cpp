#include "noondiff/diffusion/stejskal_tanner.hpp"

#include <cmath>
#include <stdexcept>

#include "noondiff/diffusion/timing.hpp"

namespace noondiff::diffusion {

void DiffusionTiming::validate() const {
    if (!(little_delta > 0.0)) {
        throw std::domain_error("gradient duration delta must be positive");
    }
    if (big_delta < little_delta) {
        throw std::domain_error("gradient separation Delta must not be shorter than delta");
    }
    if (g1 < 0.0) {
        throw std::domain_error("encode gradient g1 must be non-negative");
    }
    if (!(shape_factor > 0.0 && shape_factor <= 1.0)) {
        throw std::domain_error("gradient shape factor must lie in (0, 1]");
    }
    if (selection_delta < 0.0) {
        throw std::domain_error("selection gradient duration must be non-negative");
    }
}

double b_value(double q_gamma, double g, double delta, double big_delta) {
    const double q = q_gamma * g * delta;
    return q * q * (big_delta - delta / 3.0);
}

double stejskal_tanner(double g, double delta, double big_delta, double d_const, double q_gamma) {
    if (delta < 0.0) {
        throw std::domain_error("gradient duration delta must be non-negative");
    }
    if (big_delta < delta) {
        throw std::domain_error("gradient separation Delta must not be shorter than delta");
    }
    return std::exp(-b_value(q_gamma, g, delta, big_delta) * d_const);
}

double gradient_for_b(double b, double q_gamma, double delta, double big_delta) {
    return std::sqrt(b / (big_delta - delta / 3.0)) / (std::abs(q_gamma) * delta);
}

}  // namespace noondiff::diffusion
