#pragma once

#include <string>
#include <vector>

namespace noondiff::estimator {

struct EncodingParameters {
    double g = 0.0;          // T/m
    double delta = 0.0;      // s
    double big_delta = 0.0;  // s
};

struct EquivalentSet {
    std::string name;
    EncodingParameters params;
    // b of the NOON experiment (gradient order l * q) with these parameters
    // over b of the baseline single-quantum experiment; 1 when equivalent.
    double b_ratio = 1.0;
    // Delta >= delta still holds.
    bool valid = true;
};

// Parameter sets that keep b fixed when the gradient order grows by l:
// weaker gradient (G/l, delta, Delta); shorter gradient (G, delta/l,
// Delta - delta/3 + delta/(3l)); shorter separation
// (G, delta, (Delta - delta/3)/l^2 + delta/3). Throws std::invalid_argument
// for l < 1.
std::vector<EquivalentSet> equivalent_parameters(double l, const EncodingParameters& baseline);

}  // namespace noondiff::estimator
