#include "noondiff/sequence/pathway.hpp"

#include <cmath>
#include <stdexcept>

namespace noondiff::sequence {

double slab_survival(double net_area, double sample_length) {
    const double x = net_area * sample_length / 2.0;
    if (x == 0.0) {
        return 1.0;
    }
    return std::abs(std::sin(x) / x);
}

PathwayReport pathway_survival(const std::vector<Gradient>& gradients, const std::vector<PathwaySpec>& pathways,
                               double sample_length) {
    if (!(sample_length > 0.0)) {
        throw std::invalid_argument("sample length must be positive");
    }
    PathwayReport report;
    report.sample_length = sample_length;
    for (const auto& p : pathways) {
        if (p.q_gamma.size() != gradients.size()) {
            throw std::invalid_argument("pathway '" + p.name + "' needs one order per gradient");
        }
        PathwayEntry e;
        e.name = p.name;
        for (std::size_t k = 0; k < gradients.size(); ++k) {
            e.net_area += p.q_gamma[k] * gradients[k].area();
        }
        e.survival = slab_survival(e.net_area, sample_length);
        report.entries.push_back(e);
    }
    return report;
}

PathwaySpec noon_pathway(const spin::SpinSystemSpec& spec) {
    const double q = spin::gamma_eff(spec);
    return PathwaySpec{"noon", {q, -q, q, spec.control.gamma}};
}

}  // namespace noondiff::sequence
