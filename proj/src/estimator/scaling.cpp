#include "noondiff/estimator/scaling.hpp"

#include <stdexcept>

#include "noondiff/diffusion/stejskal_tanner.hpp"

namespace noondiff::estimator {

std::vector<EquivalentSet> equivalent_parameters(double l, const EncodingParameters& baseline) {
    if (!(l >= 1.0)) {
        throw std::invalid_argument("lopsidedness must be at least 1");
    }
    if (!(baseline.delta > 0.0) || baseline.big_delta < baseline.delta) {
        throw std::domain_error("baseline timing must satisfy Delta >= delta > 0");
    }
    const auto& b0 = baseline;
    std::vector<EquivalentSet> out{
        {"weaker_gradient", {b0.g / l, b0.delta, b0.big_delta}, 1.0, true},
        {"shorter_gradient", {b0.g, b0.delta / l, b0.big_delta - b0.delta / 3.0 + b0.delta / (3.0 * l)}, 1.0, true},
        {"shorter_separation",
         {b0.g, b0.delta, (b0.big_delta - b0.delta / 3.0) / (l * l) + b0.delta / 3.0},
         1.0,
         true},
    };
    const double b_ref = diffusion::b_value(1.0, b0.g, b0.delta, b0.big_delta);
    for (auto& e : out) {
        const auto& p = e.params;
        e.valid = p.big_delta >= p.delta;
        const double b = diffusion::b_value(l, p.g, p.delta, p.big_delta);
        e.b_ratio = b_ref > 0.0 ? b / b_ref : 1.0;
    }
    return out;
}

}  // namespace noondiff::estimator
