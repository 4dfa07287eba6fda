#pragma once

#include <string>
#include <vector>

#include "noondiff/sequence/events.hpp"

namespace noondiff::sequence {

// Gradient order q_gamma carried by a pathway during each gradient, in the
// order of the gradient list.
struct PathwaySpec {
    std::string name;
    std::vector<double> q_gamma;
};

struct PathwayEntry {
    std::string name;
    double net_area = 0.0;  // rad/m, sum of q_gamma * polarity * G * delta * shape
    double survival = 1.0;  // |sinc(A L / 2)|
};

struct PathwayReport {
    std::vector<PathwayEntry> entries;
    double sample_length = 0.01;
};

// |sinc(A L / 2)|; exactly 1 for A = 0.
double slab_survival(double net_area, double sample_length);

// Throws std::invalid_argument when a pathway lists a different number of
// orders than there are gradients, or for a non-positive sample length.
PathwayReport pathway_survival(const std::vector<Gradient>& gradients, const std::vector<PathwaySpec>& pathways,
                               double sample_length = 0.01);

// The detected NOON pathway of a NOON sequence: +gamma_eff during the first
// encode gradient, -gamma_eff during the second (after the refocusing pulse),
// +gamma_eff during G2 and +gamma_A during G3.
PathwaySpec noon_pathway(const spin::SpinSystemSpec& spec);

}  // namespace noondiff::sequence
