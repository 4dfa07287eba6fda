#pragma once

#include <string>
#include <variant>
#include <vector>

#include "noondiff/spin/state.hpp"

namespace noondiff::spin {

enum class Channel { ControlOnly, TargetsOnly, Both };
enum class Axis { X, Y, MinusX, MinusY };

// In-plane phase of an axis: X = 0, Y = pi/2, -X = pi, -Y = 3pi/2.
double axis_phase(Axis axis);

// exp(-i angle (cos(phase) I_x + sin(phase) I_y)) on every spin of the channel.
StateOperator rotate(const StateOperator& state, Channel channel, double phase, double angle);
StateOperator collective_rotation(const StateOperator& state, Channel channel, Axis axis, double angle);

// Free evolution under H_J = 2 pi J I_z^A sum_M I_z^M.
StateOperator j_evolution(const StateOperator& state, double duration);

// Single steps of a gate program. `tag` names the pulse so callers can
// address it (phase cycling, error injection).
struct RotationStep {
    Channel channel = Channel::Both;
    double phase = 0.0;
    double angle = 0.0;
    std::string tag;
};

struct CouplingStep {
    double duration = 0.0;
};

using GateStep = std::variant<RotationStep, CouplingStep>;

// Control z-rotation that the composite CNOT leaves behind for n_total
// spins: the bare composite equals CNOT * exp(-i phi I_z^A) up to a global
// phase with phi = (N-2) pi / 2. Returned in [0, 2 pi).
double cnot_residual_phase(int n_total);

// Pulse/delay program of the parallel CNOT in time order. With `exact`
// (the default) a trailing composite z-rotation removes the residual control
// phase so the block is CNOT up to a global phase for any N; the correction
// is empty when the residual vanishes (N = 2, 6, 10, ...).
std::vector<GateStep> cnot_program(const SpinSystemSpec& spec, bool exact = true);

StateOperator apply_step(const StateOperator& state, const GateStep& step);
StateOperator apply_program(const StateOperator& state, const std::vector<GateStep>& program);

StateOperator cnot_parallel(const StateOperator& state);

// Unitary of a program on the 2^N computational basis (control is the most
// significant qubit). Limited to the full-tensor spin limit.
Matrix program_unitary(const SpinSystemSpec& spec, const std::vector<GateStep>& program);

// Spin-j rotation in the m = j .. -j basis.
Matrix multiplet_rotation(int two_j, double phase, double angle);

}  // namespace noondiff::spin
