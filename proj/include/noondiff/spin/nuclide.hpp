#pragma once

#include <string>

namespace noondiff::spin {

struct Nuclide {
    std::string label;
    double gamma = 0.0;  // rad s^-1 T^-1, signed
};

enum class Representation { DickeSubspace, FullTensor };

// Which half of the AM_{N-1} register a pulse, detector or spectrum refers to.
enum class SpinRole { Control, Target };

// Heteronuclear AM_{N-1} system: one control spin A coupled with the same J to
// N-1 magnetically equivalent target spins M.
struct SpinSystemSpec {
    Nuclide control;
    Nuclide target;
    int n_total = 1;
    double j_coupling = 0.0;  // Hz
    Representation representation = Representation::DickeSubspace;

    static constexpr int kMaxFullTensorSpins = 12;

    int n_targets() const { return n_total - 1; }
    // Hilbert space dimension of the whole register, 2^N.
    double full_dimension() const;

    // Throws std::invalid_argument on a violated invariant.
    void validate() const;
};

// gamma_A + (N-1) gamma_M: the gradient order of the N-quantum NOON coherence.
double gamma_eff(const SpinSystemSpec& spec);

// gamma_eff / gamma_reference.
double lopsidedness(const SpinSystemSpec& spec, const Nuclide& reference);

// |G3/G2| that refocuses the NOON pathway after it is decoded to control
// single-quantum coherence: 1 + (N-1) gamma_M / gamma_A.
double selection_ratio(const SpinSystemSpec& spec);

}  // namespace noondiff::spin
