#pragma once

#include <cstdint>
#include <vector>

#include "noondiff/curve.hpp"
#include "noondiff/diffusion/timing.hpp"
#include "noondiff/diffusion/walkers.hpp"

namespace noondiff::diffusion {

struct EchoEstimate {
    double value = 1.0;
    double std_error = 0.0;
};

// Walker simulation of one encode/decode gradient pair of strength
// timing.g1: lobe, half the gap, phase conjugation, half the gap, identical
// lobe. Returns |<exp(i phase)>| and a bootstrap standard error over walkers.
// `stream` selects an independent random substream.
EchoEstimate echo_attenuation_mc(const DiffusionTiming& timing, double q_gamma, const DiffusionParams& params,
                                 std::uint32_t stream = 0, int bootstrap_samples = 200);

// Bootstrap standard error of |mean(exp(i phase))| resampling walkers.
double bootstrap_phasor_stderr(const std::vector<double>& phase, std::uint64_t seed, std::uint32_t stream,
                               int samples);

enum class CurveMode { Analytic, MonteCarlo };

// S/S0 at each gradient. MonteCarlo runs point i on stream i and fills sigma.
AttenuationCurve attenuation_curve(const DiffusionTiming& timing, double q_gamma, double d_const,
                                   const std::vector<double>& g_list, CurveMode mode,
                                   const DiffusionParams& params = {});

}  // namespace noondiff::diffusion
