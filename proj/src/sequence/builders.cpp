#include "noondiff/sequence/builders.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace noondiff::sequence {
namespace {

constexpr double kPi = std::numbers::pi;

Gradient encode(const DiffusionTiming& t, const char* tag) {
    Gradient g;
    g.amplitude = t.g1;
    g.duration = t.little_delta;
    g.shape_factor = t.shape_factor;
    g.role = GradientRole::Encode;
    g.tag = tag;
    return g;
}

void append_cnot(std::vector<SequenceEvent>& events, const spin::SpinSystemSpec& spec, const std::string& block) {
    for (const auto& step : spin::cnot_program(spec)) {
        if (const auto* r = std::get_if<spin::RotationStep>(&step)) {
            Pulse p;
            p.channel = r->channel;
            p.phase = r->phase;
            p.angle = r->angle;
            p.tag = block + "." + r->tag;
            events.emplace_back(p);
        } else {
            events.emplace_back(Delay{std::get<spin::CouplingStep>(step).duration});
        }
    }
}

}  // namespace

PulseSequence build_hahn_echo(const spin::SpinSystemSpec& spec, const DiffusionTiming& timing,
                              const HahnOptions& options) {
    spec.validate();
    timing.validate();
    const SpinRole role = options.channel.value_or(spec.n_targets() > 0 ? SpinRole::Target : SpinRole::Control);
    if (role == SpinRole::Target && spec.n_targets() == 0) {
        throw std::invalid_argument("single-spin system has no target channel");
    }
    const double half_gap = (timing.big_delta - timing.little_delta) / 2.0;
    if (std::abs(options.pi_offset) > half_gap) {
        throw std::domain_error("refocusing pulse offset leaves the gap between gradients");
    }
    const Channel ch = channel_of(role);

    PulseSequence seq;
    seq.spec = spec;
    seq.name = "hahn_echo";
    seq.events.emplace_back(Pulse::about(ch, Axis::Y, kPi / 2.0, "excite"));
    seq.events.emplace_back(encode(timing, kEncode1));
    seq.events.emplace_back(Delay{half_gap + options.pi_offset});
    seq.events.emplace_back(Pulse::about(ch, Axis::Y, kPi, "refocus"));
    seq.events.emplace_back(Delay{half_gap - options.pi_offset});
    seq.events.emplace_back(encode(timing, kEncode2));
    seq.events.emplace_back(Acquire{role});
    seq.validate();
    return seq;
}

PulseSequence build_noon_diffusion(const spin::SpinSystemSpec& spec, const DiffusionTiming& timing) {
    spec.validate();
    timing.validate();
    if (spec.n_total < 2) {
        throw std::invalid_argument("NOON sequence needs at least one target spin");
    }
    if (timing.g2 < 0.0 || timing.g3 < 0.0) {
        throw std::domain_error("selection gradient amplitudes must be non-negative");
    }
    const double half_gap = (timing.big_delta - timing.little_delta) / 2.0;

    PulseSequence seq;
    seq.spec = spec;
    seq.name = "noon_diffusion";
    seq.events.emplace_back(Pulse::about(Channel::ControlOnly, Axis::Y, kPi / 2.0, "hadamard"));
    append_cnot(seq.events, spec, kFirstCnot);
    seq.events.emplace_back(encode(timing, kEncode1));
    seq.events.emplace_back(Delay{half_gap});
    seq.events.emplace_back(Pulse::about(Channel::Both, Axis::Y, kPi, "refocus"));
    seq.events.emplace_back(Delay{half_gap});
    seq.events.emplace_back(encode(timing, kEncode2));

    Gradient g2;
    g2.amplitude = timing.g2;
    g2.duration = timing.selection_duration();
    g2.shape_factor = timing.shape_factor;
    g2.role = GradientRole::Select;
    g2.tag = kSelect2;
    seq.events.emplace_back(g2);

    append_cnot(seq.events, spec, kSecondCnot);

    Gradient g3 = g2;
    g3.amplitude = timing.g3 > 0.0 ? timing.g3 : spin::selection_ratio(spec) * timing.g2;
    g3.polarity = -1;
    g3.tag = kSelect3;
    seq.events.emplace_back(g3);

    seq.events.emplace_back(Acquire{SpinRole::Control});
    seq.validate();
    return seq;
}

}  // namespace noondiff::sequence
