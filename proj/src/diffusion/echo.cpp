#include "noondiff/diffusion/echo.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "noondiff/diffusion/stejskal_tanner.hpp"

namespace noondiff::diffusion {
namespace {

double phasor_modulus(const std::vector<double>& re, const std::vector<double>& im) {
    const double n = static_cast<double>(re.size());
    return std::hypot(pairwise_sum(re.data(), re.size()) / n, pairwise_sum(im.data(), im.size()) / n);
}

}  // namespace

double bootstrap_phasor_stderr(const std::vector<double>& phase, std::uint64_t seed, std::uint32_t stream,
                               int samples) {
    if (samples < 2 || phase.size() < 2) {
        return 0.0;
    }
    const std::size_t n = phase.size();
    std::vector<double> c(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = std::cos(phase[i]);
        s[i] = std::sin(phase[i]);
    }
    const PhiloxKey key = philox_key(seed);
    std::vector<double> stats(static_cast<std::size_t>(samples));
    std::vector<double> rc(n), rs(n);
    for (int b = 0; b < samples; ++b) {
        for (std::size_t i = 0; i < n; i += 4) {
            const PhiloxCounter r = philox4x32(
                make_counter(static_cast<std::uint32_t>(i / 4), static_cast<std::uint32_t>(b), stream,
                             DrawPurpose::Bootstrap),
                key);
            for (std::size_t k = 0; k < 4 && i + k < n; ++k) {
                const auto pick = static_cast<std::size_t>(to_unit_open(r[k]) * static_cast<double>(n));
                rc[i + k] = c[std::min(pick, n - 1)];
                rs[i + k] = s[std::min(pick, n - 1)];
            }
        }
        stats[static_cast<std::size_t>(b)] = phasor_modulus(rc, rs);
    }
    const double mean = pairwise_sum(stats.data(), stats.size()) / samples;
    double var = 0.0;
    for (double v : stats) {
        var += (v - mean) * (v - mean);
    }
    return std::sqrt(var / (samples - 1));
}

EchoEstimate echo_attenuation_mc(const DiffusionTiming& timing, double q_gamma, const DiffusionParams& params,
                                 std::uint32_t stream, int bootstrap_samples) {
    timing.validate();
    params.validate();
    if (params.d_const == 0.0 || timing.g1 == 0.0) {
        return EchoEstimate{1.0, 0.0};
    }
    const GradientWaveform lobe{{GradientSegment{timing.g1, timing.little_delta, timing.shape_factor}}};
    const double gap = timing.big_delta - timing.little_delta;

    WalkerEnsemble e = make_ensemble(params, stream);
    e = accumulate_phase(std::move(e), lobe, q_gamma, params);
    e = brownian_evolve(std::move(e), gap / 2.0, params);
    e = conjugate_phase(std::move(e));
    e = brownian_evolve(std::move(e), gap / 2.0, params);
    e = accumulate_phase(std::move(e), lobe, q_gamma, params);

    const std::size_t n = e.size();
    std::vector<double> c(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = std::cos(e.phase[i]);
        s[i] = std::sin(e.phase[i]);
    }
    EchoEstimate out;
    out.value = phasor_modulus(c, s);
    out.std_error = bootstrap_phasor_stderr(e.phase, params.seed, stream, bootstrap_samples);
    return out;
}

AttenuationCurve attenuation_curve(const DiffusionTiming& timing, double q_gamma, double d_const,
                                   const std::vector<double>& g_list, CurveMode mode,
                                   const DiffusionParams& params) {
    if (g_list.empty()) {
        throw std::invalid_argument("gradient list is empty");
    }
    timing.validate();
    AttenuationCurve curve;
    curve.little_delta = timing.effective_delta();
    curve.big_delta = timing.big_delta;
    curve.q_gamma = q_gamma;
    DiffusionParams p = params;
    p.d_const = d_const;
    for (std::size_t i = 0; i < g_list.size(); ++i) {
        CurvePoint point;
        point.g = g_list[i];
        if (mode == CurveMode::Analytic) {
            point.s = stejskal_tanner(point.g, timing.effective_delta(), timing.big_delta, d_const, q_gamma);
        } else {
            DiffusionTiming t = timing;
            t.g1 = point.g;
            const EchoEstimate est = echo_attenuation_mc(t, q_gamma, p, static_cast<std::uint32_t>(i));
            point.s = est.value;
            point.sigma = est.std_error;
        }
        curve.points.push_back(point);
    }
    return curve;
}

}  // namespace noondiff::diffusion
