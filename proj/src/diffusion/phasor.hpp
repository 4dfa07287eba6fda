#pragma once

#include <cstddef>

namespace noondiff::diffusion::detail {

// re_i = cos(f0 x_i + rate y_i), im_i = -sin(f0 x_i + rate y_i).
void phasors(const double* x, const double* y, double f0, double rate, double* re, double* im, std::size_t n);

}  // namespace noondiff::diffusion::detail
