#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "noondiff/spin/gates.hpp"
#include "noondiff/spin/nuclide.hpp"

namespace testing_support {

using namespace noondiff;

inline constexpr double kGammaH = 2.6752e8;
inline constexpr double kGammaP = 1.0839e8;

inline spin::SpinSystemSpec am_system(int n_total, spin::Representation rep = spin::Representation::DickeSubspace,
                                      double j = 11.0) {
    spin::SpinSystemSpec s;
    s.control = {"P31", kGammaP};
    s.target = {"H1", kGammaH};
    s.n_total = n_total;
    s.j_coupling = j;
    s.representation = rep;
    return s;
}

// Random pulses on random channels interleaved with free evolution.
inline std::vector<spin::GateStep> random_program(std::mt19937_64& rng, int length) {
    std::uniform_real_distribution<double> angle(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> delay(0.0, 0.05);
    std::uniform_int_distribution<int> kind(0, 3);
    std::vector<spin::GateStep> program;
    for (int i = 0; i < length; ++i) {
        const int k = kind(rng);
        if (k == 3) {
            program.emplace_back(spin::CouplingStep{delay(rng)});
        } else {
            spin::RotationStep r;
            r.channel = static_cast<spin::Channel>(k);
            r.phase = angle(rng);
            r.angle = angle(rng);
            program.emplace_back(r);
        }
    }
    return program;
}

inline double max_abs(const spin::Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

}  // namespace testing_support
