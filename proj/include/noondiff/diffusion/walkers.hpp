#pragma once

#include <cstdint>
#include <vector>

#include "noondiff/diffusion/rng.hpp"

namespace noondiff::diffusion {

struct DiffusionParams {
    double d_const = 0.0;           // m^2/s
    std::int64_t n_walkers = 100000;
    double dt = 1e-4;               // s, step for field-free motion
    std::uint64_t seed = 0;
    int sub_steps_per_gradient = 16;

    void validate() const;
};

// One piecewise-constant gradient lobe. amplitude carries the polarity; the
// field is on for duration * shape_factor, then off for the remainder.
struct GradientSegment {
    double amplitude = 0.0;  // T/m
    double duration = 0.0;   // s
    double shape_factor = 1.0;

    double effective_duration() const { return duration * shape_factor; }
    double area() const { return amplitude * effective_duration(); }
};

struct GradientWaveform {
    std::vector<GradientSegment> segments;

    void validate() const;
};

// 1-D walkers with positions and accumulated phases. Random draws come from
// Philox keyed by the seed; `stream` separates independent experiments
// (gradient index, interval id) and `block` advances with every step.
struct WalkerEnsemble {
    std::vector<double> z;      // m
    std::vector<double> phase;  // rad
    double time = 0.0;          // s
    std::uint32_t stream = 0;
    std::uint32_t block = 0;

    std::size_t size() const { return z.size(); }
};

WalkerEnsemble make_ensemble(const DiffusionParams& params, std::uint32_t stream, double z0 = 0.0);

// Free Wiener motion over `duration` in steps of at most dt.
WalkerEnsemble brownian_evolve(WalkerEnsemble ensemble, double duration, const DiffusionParams& params);

// Gradient lobes with diffusion during them. Each lobe is integrated with
// sub_steps_per_gradient (or more, if dt is finer) exact Brownian-bridge
// steps: the pair (dz, int z dt) is sampled jointly, so the phase
// q_gamma * G * int z dt carries no time-discretisation error.
WalkerEnsemble accumulate_phase(WalkerEnsemble ensemble, const GradientWaveform& waveform, double q_gamma,
                                const DiffusionParams& params);

// Phase conjugation of every walker (the refocusing pulse).
WalkerEnsemble conjugate_phase(WalkerEnsemble ensemble);

// Displacement and time-integrated displacement of one Brownian step of
// length h: dz = sqrt(2 D h) n1, int_0^h (z - z0) dt = h dz / 2 + sqrt(D h^3 / 6) n2.
struct BridgeStep {
    double dz = 0.0;
    double integral = 0.0;
};

BridgeStep bridge_step(double d_const, double h, double n1, double n2);

// Order-fixed pairwise sum; identical for any thread count.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace noondiff::diffusion
