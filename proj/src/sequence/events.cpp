#include "noondiff/sequence/events.hpp"

#include <cmath>
#include <stdexcept>

namespace noondiff::sequence {

Pulse Pulse::about(Channel channel, Axis axis, double angle, std::string tag) {
    Pulse p;
    p.channel = channel;
    p.phase = spin::axis_phase(axis);
    p.angle = angle;
    p.tag = std::move(tag);
    return p;
}

spin::Channel channel_of(SpinRole role) {
    return role == SpinRole::Control ? Channel::ControlOnly : Channel::TargetsOnly;
}

void PulseSequence::validate() const {
    spec.validate();
    std::size_t acquires = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& ev = events[i];
        if (const auto* d = std::get_if<Delay>(&ev)) {
            if (!(d->duration >= 0.0) || !std::isfinite(d->duration)) {
                throw std::invalid_argument("delay " + std::to_string(i) + " has a negative duration");
            }
        } else if (const auto* g = std::get_if<Gradient>(&ev)) {
            if (!(g->duration >= 0.0) || !std::isfinite(g->duration)) {
                throw std::invalid_argument("gradient " + std::to_string(i) + " has a negative duration");
            }
            if (!(g->amplitude >= 0.0) || !std::isfinite(g->amplitude)) {
                throw std::invalid_argument("gradient " + std::to_string(i) + " amplitude must be non-negative");
            }
            if (!(g->shape_factor > 0.0 && g->shape_factor <= 1.0)) {
                throw std::invalid_argument("gradient " + std::to_string(i) + " shape factor outside (0, 1]");
            }
            if (g->polarity != 1 && g->polarity != -1) {
                throw std::invalid_argument("gradient " + std::to_string(i) + " polarity must be +1 or -1");
            }
        } else if (const auto* p = std::get_if<Pulse>(&ev)) {
            if (!std::isfinite(p->applied_angle()) || !std::isfinite(p->applied_phase())) {
                throw std::invalid_argument("pulse " + std::to_string(i) + " is not finite");
            }
        } else {
            ++acquires;
            if (i + 1 != events.size()) {
                throw std::invalid_argument("acquire must be the last event");
            }
        }
    }
    if (acquires != 1) {
        throw std::invalid_argument("sequence needs exactly one acquire");
    }
    if (acquire().channel == SpinRole::Target && spec.n_targets() == 0) {
        throw std::invalid_argument("cannot acquire on targets of a single-spin system");
    }
}

double PulseSequence::total_duration() const {
    double t = 0.0;
    for (const auto& ev : events) {
        if (const auto* d = std::get_if<Delay>(&ev)) {
            t += d->duration;
        } else if (const auto* g = std::get_if<Gradient>(&ev)) {
            t += g->duration;
        }
    }
    return t;
}

std::vector<Gradient> PulseSequence::gradients() const {
    std::vector<Gradient> out;
    for (const auto& ev : events) {
        if (const auto* g = std::get_if<Gradient>(&ev)) {
            out.push_back(*g);
        }
    }
    return out;
}

const Acquire& PulseSequence::acquire() const {
    if (events.empty() || !std::holds_alternative<Acquire>(events.back())) {
        throw std::invalid_argument("sequence does not end with an acquire");
    }
    return std::get<Acquire>(events.back());
}

std::vector<std::size_t> PulseSequence::find_pulses(const std::string& tag) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (const auto* p = std::get_if<Pulse>(&events[i])) {
            if (p->tag == tag || p->tag.rfind(tag + ".", 0) == 0) {
                out.push_back(i);
            }
        }
    }
    return out;
}

std::optional<std::size_t> PulseSequence::find_event(const std::string& tag) const {
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (const auto* p = std::get_if<Pulse>(&events[i]); p && p->tag == tag) {
            return i;
        }
        if (const auto* g = std::get_if<Gradient>(&events[i]); g && g->tag == tag) {
            return i;
        }
    }
    return std::nullopt;
}

}  // namespace noondiff::sequence
