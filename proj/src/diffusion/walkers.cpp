#include "noondiff/diffusion/walkers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace noondiff::diffusion {
namespace {

std::int64_t step_count(double duration, double dt) {
    if (duration <= 0.0) {
        return 0;
    }
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(duration / dt - 1e-9)));
}

}  // namespace

void DiffusionParams::validate() const {
    if (!(d_const >= 0.0) || !std::isfinite(d_const)) {
        throw std::domain_error("diffusion constant must be non-negative");
    }
    if (n_walkers < 1) {
        throw std::invalid_argument("n_walkers must be at least 1");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("dt must be positive");
    }
    if (sub_steps_per_gradient < 4) {
        throw std::invalid_argument("sub_steps_per_gradient must be at least 4");
    }
}

void GradientWaveform::validate() const {
    for (const auto& seg : segments) {
        if (!(seg.duration > 0.0)) {
            throw std::invalid_argument("gradient segment durations must be positive");
        }
        if (!(seg.shape_factor > 0.0 && seg.shape_factor <= 1.0)) {
            throw std::invalid_argument("gradient shape factor must lie in (0, 1]");
        }
    }
}

BridgeStep bridge_step(double d_const, double h, double n1, double n2) {
    BridgeStep s;
    s.dz = std::sqrt(2.0 * d_const * h) * n1;
    s.integral = 0.5 * h * s.dz + std::sqrt(d_const * h * h * h / 6.0) * n2;
    return s;
}

double pairwise_sum(const double* values, std::size_t count) {
    if (count <= 16) {
        double acc = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            acc += values[i];
        }
        return acc;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

WalkerEnsemble make_ensemble(const DiffusionParams& params, std::uint32_t stream, double z0) {
    params.validate();
    WalkerEnsemble e;
    e.z.assign(static_cast<std::size_t>(params.n_walkers), z0);
    e.phase.assign(static_cast<std::size_t>(params.n_walkers), 0.0);
    e.stream = stream;
    return e;
}

WalkerEnsemble brownian_evolve(WalkerEnsemble ensemble, double duration, const DiffusionParams& params) {
    if (duration < 0.0) {
        throw std::invalid_argument("evolution duration must be non-negative");
    }
    const std::int64_t steps = step_count(duration, params.dt);
    if (steps == 0) {
        return ensemble;
    }
    ensemble.time += duration;
    if (params.d_const == 0.0) {
        return ensemble;
    }
    const double sigma = std::sqrt(2.0 * params.d_const * duration / static_cast<double>(steps));
    const PhiloxKey key = philox_key(params.seed);
    const auto calls = static_cast<std::uint32_t>((steps + 3) / 4);
    const auto n = static_cast<std::int64_t>(ensemble.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t w = 0; w < n; ++w) {
        double z = ensemble.z[static_cast<std::size_t>(w)];
        std::int64_t done = 0;
        for (std::uint32_t c = 0; c < calls; ++c) {
            const auto g = normals4(key, make_counter(static_cast<std::uint32_t>(w), ensemble.block + c,
                                                      ensemble.stream, DrawPurpose::Brownian));
            for (int k = 0; k < 4 && done < steps; ++k, ++done) {
                z += sigma * g[static_cast<std::size_t>(k)];
            }
        }
        ensemble.z[static_cast<std::size_t>(w)] = z;
    }
    ensemble.block += calls;
    return ensemble;
}

WalkerEnsemble accumulate_phase(WalkerEnsemble ensemble, const GradientWaveform& waveform, double q_gamma,
                                const DiffusionParams& params) {
    waveform.validate();
    const PhiloxKey key = philox_key(params.seed);
    const auto n = static_cast<std::int64_t>(ensemble.size());
    for (const auto& seg : waveform.segments) {
        const double on = seg.effective_duration();
        const std::int64_t sub =
            std::max<std::int64_t>(params.sub_steps_per_gradient, step_count(on, params.dt));
        const double h = on / static_cast<double>(sub);
        const double k = q_gamma * seg.amplitude;
        const auto calls = static_cast<std::uint32_t>((sub + 1) / 2);
#pragma omp parallel for schedule(static)
        for (std::int64_t w = 0; w < n; ++w) {
            double z = ensemble.z[static_cast<std::size_t>(w)];
            double integral = 0.0;
            std::int64_t done = 0;
            for (std::uint32_t c = 0; c < calls; ++c) {
                const auto g = normals4(key, make_counter(static_cast<std::uint32_t>(w), ensemble.block + c,
                                                          ensemble.stream, DrawPurpose::Brownian));
                for (int pair = 0; pair < 2 && done < sub; ++pair, ++done) {
                    const BridgeStep s = bridge_step(params.d_const, h, g[2 * pair], g[2 * pair + 1]);
                    integral += z * h + s.integral;
                    z += s.dz;
                }
            }
            ensemble.z[static_cast<std::size_t>(w)] = z;
            ensemble.phase[static_cast<std::size_t>(w)] += k * integral;
        }
        ensemble.block += calls;
        ensemble.time += on;
        if (seg.duration > on) {
            ensemble = brownian_evolve(std::move(ensemble), seg.duration - on, params);
        }
    }
    return ensemble;
}

WalkerEnsemble conjugate_phase(WalkerEnsemble ensemble) {
    for (auto& p : ensemble.phase) {
        p = -p;
    }
    return ensemble;
}

}  // namespace noondiff::diffusion
