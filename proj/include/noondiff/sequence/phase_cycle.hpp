#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "noondiff/sequence/executor.hpp"

namespace noondiff::sequence {

// Phase shifts applied to the tagged pulse(s) on successive scans, with the
// receiver weight of each scan. With an empty receiver list the receivers
// are derived from the wanted pathway (orders `pathway_orders` right after
// event `pathway_event`) on the error-free sequence, see derive_receivers;
// without a pathway they default to +1.
struct PhaseCycle {
    std::string pulse_tag;
    std::vector<double> phase_shifts;
    std::vector<Complex> receivers;
    std::optional<std::size_t> pathway_event;
    std::set<int> pathway_orders;
};

// Two scans: the tagged pulse at its nominal phase, then inverted (shift pi).
PhaseCycle two_step_cycle(const std::string& pulse_tag);

// Two-step cycle of the first-CNOT target pulse of a NOON sequence, with the
// NOON orders +-N after the first CNOT block as the wanted pathway.
PhaseCycle noon_phase_cycle(const PulseSequence& noon_sequence);

// Copy with every flip_scale and phase_shift reset to nominal.
PulseSequence nominal(const PulseSequence& seq);

struct CycleResult {
    Complex signal{0.0, 0.0};  // mean of receiver-weighted scan signals
    Complex ratio{0.0, 0.0};   // signal over the first scan's reference
    std::vector<Complex> scans;
    std::vector<Complex> receivers;
};

// Copy of the sequence with the tagged pulses shifted in phase.
PulseSequence with_phase_shift(const PulseSequence& seq, const std::string& tag, double shift);

// Copy with the flip angle of all pulses matching the tag scaled.
PulseSequence with_flip_error(const PulseSequence& seq, const std::string& tag, double flip_scale);

// mean_k receivers[k] * signals[k].
Complex combine_scans(const std::vector<Complex>& signals, const std::vector<Complex>& receivers);

// Receiver phases that make the reference pathway add coherently: each scan
// of the ideal sequence (`reference`) is run with only the coherence orders
// `pathway_orders` kept after event `pathway_event`, and the receiver is the
// unit phasor conj(S_k) S_0 / |S_k S_0|, or 1 when the scan carries no
// pathway signal.
std::vector<Complex> derive_receivers(const PulseSequence& reference, const PhaseCycle& cycle,
                                      const StateOperator& rho0, const diffusion::DiffusionModel& model,
                                      std::size_t pathway_event, const std::set<int>& pathway_orders,
                                      const ExecuteOptions& options = {});

// Runs every scan and combines them. Throws std::invalid_argument when the
// tag matches no pulse or the receiver count does not match.
CycleResult apply_phase_cycle(const PulseSequence& seq, const PhaseCycle& cycle, const StateOperator& rho0,
                              const diffusion::DiffusionModel& model, const ExecuteOptions& options = {});

}  // namespace noondiff::sequence
