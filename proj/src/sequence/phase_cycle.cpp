#include "noondiff/sequence/phase_cycle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "noondiff/sequence/builders.hpp"

namespace noondiff::sequence {

PhaseCycle two_step_cycle(const std::string& pulse_tag) {
    PhaseCycle c;
    c.pulse_tag = pulse_tag;
    c.phase_shifts = {0.0, std::numbers::pi};
    return c;
}

PhaseCycle noon_phase_cycle(const PulseSequence& noon_sequence) {
    const auto block = noon_sequence.find_pulses(kFirstCnot);
    if (block.empty()) {
        throw std::invalid_argument("sequence has no first CNOT block");
    }
    PhaseCycle c = two_step_cycle(kFirstCnotTargetPulse);
    c.pathway_event = block.back();
    c.pathway_orders = {noon_sequence.spec.n_total, -noon_sequence.spec.n_total};
    return c;
}

PulseSequence nominal(const PulseSequence& seq) {
    PulseSequence out = seq;
    for (auto& ev : out.events) {
        if (auto* p = std::get_if<Pulse>(&ev)) {
            p->flip_scale = 1.0;
            p->phase_shift = 0.0;
        }
    }
    return out;
}

PulseSequence with_phase_shift(const PulseSequence& seq, const std::string& tag, double shift) {
    const auto idx = seq.find_pulses(tag);
    if (idx.empty()) {
        throw std::invalid_argument("no pulse tagged '" + tag + "'");
    }
    PulseSequence out = seq;
    for (std::size_t i : idx) {
        std::get<Pulse>(out.events[i]).phase_shift += shift;
    }
    return out;
}

PulseSequence with_flip_error(const PulseSequence& seq, const std::string& tag, double flip_scale) {
    const auto idx = seq.find_pulses(tag);
    if (idx.empty()) {
        throw std::invalid_argument("no pulse tagged '" + tag + "'");
    }
    PulseSequence out = seq;
    for (std::size_t i : idx) {
        std::get<Pulse>(out.events[i]).flip_scale *= flip_scale;
    }
    return out;
}

Complex combine_scans(const std::vector<Complex>& signals, const std::vector<Complex>& receivers) {
    if (signals.size() != receivers.size() || signals.empty()) {
        throw std::invalid_argument("one receiver weight per scan is required");
    }
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < signals.size(); ++k) {
        acc += receivers[k] * signals[k];
    }
    return acc / static_cast<double>(signals.size());
}

std::vector<Complex> derive_receivers(const PulseSequence& reference, const PhaseCycle& cycle,
                                      const StateOperator& rho0, const diffusion::DiffusionModel& model,
                                      std::size_t pathway_event, const std::set<int>& pathway_orders,
                                      const ExecuteOptions& options) {
    ExecuteOptions opt = options;
    opt.normalize = false;
    opt.filter_after = pathway_event;
    opt.keep_orders = pathway_orders;
    std::vector<Complex> scans;
    for (double shift : cycle.phase_shifts) {
        scans.push_back(execute(with_phase_shift(reference, cycle.pulse_tag, shift), rho0, model, opt).signal);
    }
    std::vector<Complex> receivers;
    for (const auto& s : scans) {
        const double mag = std::abs(s) * std::abs(scans.front());
        receivers.push_back(mag > 0.0 ? std::conj(s) * scans.front() / mag : Complex{1.0, 0.0});
    }
    return receivers;
}

CycleResult apply_phase_cycle(const PulseSequence& seq, const PhaseCycle& cycle, const StateOperator& rho0,
                              const diffusion::DiffusionModel& model, const ExecuteOptions& options) {
    if (cycle.phase_shifts.empty()) {
        throw std::invalid_argument("phase cycle has no scans");
    }
    if (seq.find_pulses(cycle.pulse_tag).empty()) {
        throw std::invalid_argument("no pulse tagged '" + cycle.pulse_tag + "'");
    }
    CycleResult out;
    out.receivers = cycle.receivers;
    if (out.receivers.empty() && cycle.pathway_event) {
        out.receivers = derive_receivers(nominal(seq), cycle, rho0, model, *cycle.pathway_event,
                                         cycle.pathway_orders, options);
    } else if (out.receivers.empty()) {
        out.receivers.assign(cycle.phase_shifts.size(), Complex{1.0, 0.0});
    }
    if (out.receivers.size() != cycle.phase_shifts.size()) {
        throw std::invalid_argument("one receiver weight per scan is required");
    }
    ExecuteOptions opt = options;
    opt.normalize = false;
    Complex reference{1.0, 0.0};
    for (std::size_t k = 0; k < cycle.phase_shifts.size(); ++k) {
        const PulseSequence scan = with_phase_shift(seq, cycle.pulse_tag, cycle.phase_shifts[k]);
        out.scans.push_back(execute(scan, rho0, model, opt).signal);
        if (k == 0 && options.normalize) {
            reference = execute(without_encoding(scan), rho0, model, opt).signal;
        }
    }
    out.signal = combine_scans(out.scans, out.receivers);
    out.ratio = std::abs(reference) > 0.0 ? out.signal / reference : out.signal;
    return out;
}

}  // namespace noondiff::sequence
