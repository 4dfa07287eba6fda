#include "noondiff/spin/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "noondiff/spin/multiplet.hpp"

namespace noondiff::spin {
namespace {

// Per-line complex amplitudes: index k for the control, index a for targets.
std::vector<Complex> line_amplitudes(const StateOperator& state, SpinRole role) {
    const int n = state.spec().n_targets();
    std::vector<Complex> amp(role == SpinRole::Control ? n + 1 : 2, Complex{0.0, 0.0});
    if (role == SpinRole::Target && n == 0) {
        return {};
    }
    for (const auto& sec : state.sectors()) {
        const double mult = sec.multiplicity;
        if (sec.two_j < 0) {
            const Eigen::Index half = Eigen::Index{1} << n;
            for (Eigen::Index x = 0; x < half; ++x) {
                const int k = std::popcount(static_cast<unsigned long long>(x));
                if (role == SpinRole::Control) {
                    amp[k] += sec.rho(x, half + x);
                    continue;
                }
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < n; ++b) {
                        const Eigen::Index bit = Eigen::Index{1} << b;
                        if (!(x & bit)) {
                            amp[a] += sec.rho(a * half + x, a * half + (x | bit));
                        }
                    }
                }
            }
            continue;
        }
        const int d = sec.two_j + 1;
        const int k0 = (n - sec.two_j) / 2;
        if (role == SpinRole::Control) {
            for (int idx = 0; idx < d; ++idx) {
                amp[k0 + idx] += mult * sec.rho(idx, d + idx);
            }
            continue;
        }
        const Eigen::MatrixXd lower = multiplet::lowering(sec.two_j);
        for (int a = 0; a < 2; ++a) {
            for (int idx = 0; idx + 1 < d; ++idx) {
                amp[a] += mult * lower(idx + 1, idx) * sec.rho(a * d + idx, a * d + idx + 1);
            }
        }
    }
    return amp;
}

}  // namespace

Complex detection_amplitude(const StateOperator& state, SpinRole role) {
    Complex total{0.0, 0.0};
    for (const auto& a : line_amplitudes(state, role)) {
        total += a;
    }
    return total;
}

std::vector<StickLine> stick_spectrum(const StateOperator& state, SpinRole role) {
    const auto amp = line_amplitudes(state, role);
    const int n = state.spec().n_targets();
    const double j = state.spec().j_coupling;
    std::vector<StickLine> lines;
    Complex largest{0.0, 0.0};
    for (const auto& a : amp) {
        if (std::abs(a) > std::abs(largest)) {
            largest = a;
        }
    }
    const Complex rephase = std::abs(largest) > 0.0 ? std::conj(largest) / std::abs(largest) : Complex{1.0, 0.0};
    for (std::size_t i = 0; i < amp.size(); ++i) {
        StickLine line;
        if (role == SpinRole::Control) {
            line.offset_hz = n == 0 ? 0.0 : j * (static_cast<double>(i) - n / 2.0);
        } else {
            line.offset_hz = i == 0 ? j / 2.0 : -j / 2.0;
        }
        line.amplitude = amp[i];
        line.intensity = (amp[i] * rephase).real();
        lines.push_back(line);
    }
    std::sort(lines.begin(), lines.end(),
              [](const StickLine& a, const StickLine& b) { return a.offset_hz < b.offset_hz; });
    return lines;
}

}  // namespace noondiff::spin
