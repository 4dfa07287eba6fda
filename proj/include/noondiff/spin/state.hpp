#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "noondiff/spin/nuclide.hpp"

namespace noondiff::spin {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Control bit a (0 = spin up) and the number of flipped targets k.
struct BasisLabel {
    int control = 0;
    int flips = 0;
};

// One block of a density operator.
//
// FullTensor states hold a single sector over the 2^N computational basis
// (two_j = -1). DickeSubspace states hold one sector per total target spin j,
// ordered from j = (N-1)/2 down; a sector appears `multiplicity` times in the
// full space. Within a sector the index is a*(2j+1) + (j - m), so the first
// sector is the 2N-dimensional symmetric (Dicke) basis {|a>|D_k>}.
struct Sector {
    int two_j = -1;
    int multiplicity = 1;
    Matrix rho;
};

struct SectorShape {
    int two_j = -1;
    int multiplicity = 1;
    Eigen::Index dim = 0;
};

std::vector<SectorShape> sector_layout(const SpinSystemSpec& spec);

class StateOperator {
public:
    StateOperator(SpinSystemSpec spec, std::vector<Sector> sectors);

    static StateOperator zero(const SpinSystemSpec& spec);
    // Unnormalised identity on the full 2^N space.
    static StateOperator identity(const SpinSystemSpec& spec);

    const SpinSystemSpec& spec() const { return spec_; }
    Representation representation() const { return spec_.representation; }
    const std::vector<Sector>& sectors() const { return sectors_; }

    BasisLabel label(std::size_t sector, Eigen::Index index) const;

    Complex trace() const;
    // Hilbert-Schmidt norm in the full space (sectors weighted by multiplicity).
    double frobenius_norm() const;
    bool is_hermitian(double tol = 1e-12) const;
    // Eigenvalues of the full-space operator, ascending, with multiplicity.
    std::vector<double> eigenvalues() const;
    double min_eigenvalue() const;

    // Traceless part rho - tr(rho)/2^N.
    StateOperator deviation() const;

    // Full 2^N matrix; control is the most significant qubit.
    Matrix to_full() const;

    StateOperator& operator+=(const StateOperator& other);
    StateOperator& operator*=(Complex factor);

    friend StateOperator operator+(StateOperator lhs, const StateOperator& rhs) { return lhs += rhs; }
    friend StateOperator operator-(StateOperator lhs, const StateOperator& rhs) {
        lhs += rhs * Complex{-1.0, 0.0};
        return lhs;
    }
    friend StateOperator operator*(StateOperator lhs, Complex factor) { return lhs *= factor; }

private:
    void check_compatible(const StateOperator& other) const;

    SpinSystemSpec spec_;
    std::vector<Sector> sectors_;
};

// tr(A^dagger B) over the full space.
Complex hs_inner(const StateOperator& a, const StateOperator& b);
double frobenius_distance(const StateOperator& a, const StateOperator& b);

// Size of the sector that carries pure symmetric states (2N or 2^N).
Eigen::Index pure_state_dimension(const SpinSystemSpec& spec);

// |a> (x) |D_k>, the control in state a and the symmetric target state with
// k flipped spins. In FullTensor mode this is the normalised symmetric sum.
Vector dicke_ket(const SpinSystemSpec& spec, int control, int flips);

// (|0 0...0> + |1 1...1>)/sqrt(2).
Vector noon_ket(const SpinSystemSpec& spec);

// Lifts a ket of the pure-state sector into the 2^N computational basis.
Vector to_full_vector(const SpinSystemSpec& spec, const Vector& psi);

// (1 - eps)/2^N + eps |psi><psi|. Throws std::domain_error for eps outside
// [0, 1] or a non-normalised psi.
StateOperator make_pseudopure(const SpinSystemSpec& spec, const Vector& psi, double epsilon);

// 1/2^N + eps_control I_z^A + eps_target sum_M I_z^M.
StateOperator thermal_state(const SpinSystemSpec& spec, double eps_control, double eps_target);

// Control polarisation after an ideal INEPT transfer from the targets.
double inept_polarization(const SpinSystemSpec& spec, double eps_control);

// Normalised overlap of traceless parts, the usual NMR "correlation" fidelity
// between a pseudopure state and the pure state it mimics. 1 for
// make_pseudopure(spec, psi, eps) with any eps > 0.
double correlation_fidelity(const StateOperator& rho, const Vector& psi);

}  // namespace noondiff::spin
