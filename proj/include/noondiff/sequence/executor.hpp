#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "noondiff/diffusion/model.hpp"
#include "noondiff/sequence/events.hpp"
#include "noondiff/spin/state.hpp"

namespace noondiff::sequence {

using spin::Complex;
using spin::StateOperator;

// How coherence that is still dephased at acquisition contributes.
// Ideal: infinitely extended sample, only fully refocused components
// survive. UniformSlab: uniform sample of length sample_length, a component
// with residual wavenumber F is weighted by sinc(F L / 2).
enum class SpatialProfile { Ideal, UniformSlab };

struct ExecuteOptions {
    SpatialProfile profile = SpatialProfile::Ideal;
    double sample_length = 0.01;  // m
    // Divide by a reference run with all encode gradients switched off.
    bool normalize = true;
    // Restrict the model average to one walker batch (< 0: all walkers).
    int batch = -1;
    // Stop after this many events and report the state there.
    std::optional<std::size_t> stop_after;
    // After event `filter_after`, keep only elements whose coherence order
    // is in `keep_orders` (pathway isolation for diagnostics).
    std::optional<std::size_t> filter_after;
    std::set<int> keep_orders;
    // Components with Frobenius norm below this fraction of the input are
    // dropped.
    double prune_fraction = 1e-15;
};

struct ExecuteResult {
    Complex signal{0.0, 0.0};     // tr(D rho) of the weighted final state
    Complex reference{1.0, 0.0};  // same with encode gradients off
    Complex ratio{0.0, 0.0};      // signal / reference (signal when not normalised)
    double std_error = 0.0;       // batch standard error of Re(ratio), walker models only
    StateOperator state;          // spatially weighted state at the end (or stop point)
    std::size_t components = 0;   // pathway components alive at the end
};

// Runs the sequence from rho0. Pulses and delays act through spin-core;
// each gradient splits the state into coherence pathways by gradient order
// q_gamma = gamma_A d_control + gamma_M d_targets, each carrying its running
// wavenumber F = sum q G delta. The diffusion model supplies the average
// phase factor for every interval. Throws std::invalid_argument if rho0 does
// not belong to the sequence's spin system.
ExecuteResult execute(const PulseSequence& seq, const StateOperator& rho0, const diffusion::DiffusionModel& model,
                      const ExecuteOptions& options = {});

// The same sequence with every encode gradient set to zero amplitude.
PulseSequence without_encoding(const PulseSequence& seq);

}  // namespace noondiff::sequence
