#include "phasor.hpp"

#include <cmath>

namespace noondiff::diffusion::detail {

// Built with vectorised libm; the loops stay separate so that cos and sin
// each get a SIMD variant.
void phasors(const double* x, const double* y, double f0, double rate, double* re, double* im, std::size_t n) {
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) {
        im[i] = f0 * x[i] + rate * y[i];
    }
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = std::cos(im[i]);
    }
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) {
        im[i] = -std::sin(im[i]);
    }
}

}  // namespace noondiff::diffusion::detail
