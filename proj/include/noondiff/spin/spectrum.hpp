#pragma once

#include <vector>

#include "noondiff/spin/state.hpp"

namespace noondiff::spin {

struct StickLine {
    double offset_hz = 0.0;
    double intensity = 0.0;
    Complex amplitude{0.0, 0.0};
};

// Complex detected signal tr(D rho) for the single-quantum lowering operator
// of the role: sum_k |1,k><0,k| on the control, the collective J- on the
// targets.
Complex detection_amplitude(const StateOperator& state, SpinRole role);

// Single-quantum lines of one channel. Control lines sit at J (k - n/2) for
// k flipped targets (n + 1 lines, all listed even when empty); target lines
// at +J/2 (control up) and -J/2 (control down). Intensities are the real
// parts after phasing the largest line to be positive and real.
std::vector<StickLine> stick_spectrum(const StateOperator& state, SpinRole role);

}  // namespace noondiff::spin
