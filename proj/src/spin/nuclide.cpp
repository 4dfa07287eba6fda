#include "noondiff/spin/nuclide.hpp"

#include <cmath>
#include <stdexcept>

namespace noondiff::spin {

double SpinSystemSpec::full_dimension() const { return std::ldexp(1.0, n_total); }

void SpinSystemSpec::validate() const {
    if (control.gamma == 0.0 || !std::isfinite(control.gamma)) {
        throw std::invalid_argument("control nuclide '" + control.label + "' has zero gyromagnetic ratio");
    }
    if (target.gamma == 0.0 || !std::isfinite(target.gamma)) {
        throw std::invalid_argument("target nuclide '" + target.label + "' has zero gyromagnetic ratio");
    }
    if (n_total < 1) {
        throw std::invalid_argument("spin system needs at least one spin");
    }
    if (n_total >= 2 && !(j_coupling > 0.0)) {
        throw std::invalid_argument("J coupling must be positive when targets are present");
    }
    if (representation == Representation::FullTensor && n_total > kMaxFullTensorSpins) {
        throw std::invalid_argument("full tensor representation is limited to 12 spins");
    }
}

double gamma_eff(const SpinSystemSpec& spec) {
    return spec.control.gamma + spec.n_targets() * spec.target.gamma;
}

double lopsidedness(const SpinSystemSpec& spec, const Nuclide& reference) {
    return gamma_eff(spec) / reference.gamma;
}

double selection_ratio(const SpinSystemSpec& spec) {
    return gamma_eff(spec) / spec.control.gamma;
}

}  // namespace noondiff::spin
