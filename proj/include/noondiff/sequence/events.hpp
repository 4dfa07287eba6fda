#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "noondiff/spin/gates.hpp"

namespace noondiff::sequence {

using spin::Axis;
using spin::Channel;
using spin::SpinRole;

// Ideal instantaneous rotation. flip_scale and phase_shift perturb the
// nominal pulse (error injection, phase cycling) without changing it.
struct Pulse {
    Channel channel = Channel::Both;
    double phase = 0.0;  // rad, 0 = x
    double angle = 0.0;  // rad
    std::string tag;
    double flip_scale = 1.0;
    double phase_shift = 0.0;

    static Pulse about(Channel channel, Axis axis, double angle, std::string tag = {});
    double applied_phase() const { return phase + phase_shift; }
    double applied_angle() const { return angle * flip_scale; }
};

struct Delay {
    double duration = 0.0;  // s
};

enum class GradientRole { Encode, Select };

struct Gradient {
    double amplitude = 0.0;  // T/m, non-negative
    double duration = 0.0;   // s
    double shape_factor = 1.0;
    int polarity = 1;
    GradientRole role = GradientRole::Encode;
    std::string tag;

    double signed_amplitude() const { return polarity * amplitude; }
    double effective_duration() const { return duration * shape_factor; }
    // polarity * G * delta * shape, T s / m.
    double area() const { return signed_amplitude() * effective_duration(); }
};

struct Acquire {
    SpinRole channel = SpinRole::Control;
};

using SequenceEvent = std::variant<Pulse, Delay, Gradient, Acquire>;

struct PulseSequence {
    spin::SpinSystemSpec spec;
    std::vector<SequenceEvent> events;
    std::string name;

    // Throws std::invalid_argument for negative durations, bad shape factors
    // or polarities, or anything other than exactly one trailing Acquire.
    void validate() const;
    double total_duration() const;
    std::vector<Gradient> gradients() const;
    const Acquire& acquire() const;

    // Indices of pulses whose tag equals `tag` or starts with `tag` + ".".
    std::vector<std::size_t> find_pulses(const std::string& tag) const;
    // Index of the first event carrying `tag` (pulse or gradient).
    std::optional<std::size_t> find_event(const std::string& tag) const;
};

spin::Channel channel_of(SpinRole role);

}  // namespace noondiff::sequence
