#pragma once

namespace noondiff::diffusion {

// b = q^2 G^2 delta^2 (Delta - delta/3), s/m^2.
double b_value(double q_gamma, double g, double delta, double big_delta);

// S/S0 = exp(-b D). Throws std::domain_error when big_delta < delta or
// delta < 0.
double stejskal_tanner(double g, double delta, double big_delta, double d_const, double q_gamma);

// Gradient giving a requested b at fixed timing.
double gradient_for_b(double b, double q_gamma, double delta, double big_delta);

}  // namespace noondiff::diffusion
