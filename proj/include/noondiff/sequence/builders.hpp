#pragma once

#include <optional>

#include "noondiff/diffusion/timing.hpp"
#include "noondiff/sequence/events.hpp"

namespace noondiff::sequence {

using diffusion::DiffusionTiming;

struct HahnOptions {
    // Observed nuclide; defaults to the targets when there are any.
    std::optional<SpinRole> channel;
    // Shift of the refocusing pulse away from the midpoint of the gap, s.
    double pi_offset = 0.0;
};

// 90_y, G1, (Delta - delta)/2, 180_y, (Delta - delta)/2, G1, acquire.
// Throws std::domain_error for invalid timing.
PulseSequence build_hahn_echo(const spin::SpinSystemSpec& spec, const DiffusionTiming& timing,
                              const HahnOptions& options = {});

// Pseudo-Hadamard on the control, CNOT block ("cnot1.*" pulses), G1,
// refocusing 180 on both channels mid-gap, G1, selection gradient G2,
// CNOT block ("cnot2.*"), selection gradient G3 of opposite polarity,
// acquire on the control. When timing.g3 is zero |G3| is set to
// selection_ratio(spec) * G2, which refocuses the NOON pathway.
// Throws std::invalid_argument for N < 2, std::domain_error for bad timing.
PulseSequence build_noon_diffusion(const spin::SpinSystemSpec& spec, const DiffusionTiming& timing);

// Event tags used by the builders.
inline constexpr const char* kFirstCnot = "cnot1";
inline constexpr const char* kSecondCnot = "cnot2";
inline constexpr const char* kFirstCnotTargetPulse = "cnot1.xbar_m";
inline constexpr const char* kEncode1 = "encode1";
inline constexpr const char* kEncode2 = "encode2";
inline constexpr const char* kSelect2 = "select_g2";
inline constexpr const char* kSelect3 = "select_g3";

}  // namespace noondiff::sequence
