#include <gtest/gtest.h>

#include <complex>
#include <numbers>

#include "noondiff/spin/coherence.hpp"
#include "noondiff/spin/gates.hpp"
#include "noondiff/spin/multiplet.hpp"
#include "noondiff/spin/spectrum.hpp"
#include "noondiff/spin/state.hpp"
#include "support.hpp"

using namespace noondiff;
using namespace noondiff::spin;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

Matrix qubit_rotation(double phase, double angle) {
    Matrix sx(2, 2), sy(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, -kI, kI, 0;
    return std::cos(angle / 2) * Matrix::Identity(2, 2) -
           kI * std::sin(angle / 2) * (std::cos(phase) * sx + std::sin(phase) * sy);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix cnot_oracle(int n_total) {
    const Eigen::Index dim = Eigen::Index(1) << n_total;
    const Eigen::Index half = dim / 2;
    Matrix u = Matrix::Zero(dim, dim);
    for (Eigen::Index t = 0; t < half; ++t) {
        u(t, t) = 1.0;
        u(half + ((half - 1) ^ t), half + t) = 1.0;
    }
    return u;
}

// max |u - e^{i theta} v| with theta fitted from the overlap.
double distance_up_to_phase(const Matrix& u, const Matrix& v) {
    const Complex overlap = (v.adjoint() * u).trace();
    const Complex phase = overlap / std::abs(overlap);
    return max_abs(u - phase * v);
}

StateOperator hadamard(const StateOperator& rho) {
    return rotate(rho, Channel::ControlOnly, axis_phase(Axis::Y), kPi / 2);
}

}  // namespace

TEST(SpinSystem, GammaEffAndSelectionRatio) {
    const auto s = am_system(10);
    EXPECT_NEAR(gamma_eff(s), kGammaP + 9 * kGammaH, 1e-3);
    EXPECT_NEAR(lopsidedness(s, {"H1", kGammaH}), (kGammaP + 9 * kGammaH) / kGammaH, 1e-12);
    EXPECT_NEAR(selection_ratio(s), 9 * kGammaH / kGammaP + 1, 1e-12);
}

TEST(SpinSystem, ValidateRejectsBadInput) {
    auto s = am_system(3);
    s.j_coupling = 0.0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = am_system(0);
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = am_system(13, Representation::FullTensor);
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = am_system(3);
    s.target.gamma = 0.0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Multiplet, MultiplicitiesMatchBinomialDifferences) {
    for (int n = 1; n <= 9; ++n) {
        double dim = 0.0;
        for (int two_j : multiplet::allowed_two_j(n)) {
            const int k = (n - two_j) / 2;
            const double expected = binomial(n, k) - (k > 0 ? binomial(n, k - 1) : 0.0);
            EXPECT_EQ(multiplet::multiplicity(n, two_j), static_cast<int>(expected));
            dim += expected * (two_j + 1);
        }
        EXPECT_EQ(dim, std::ldexp(1.0, n));
    }
}

TEST(Multiplet, ProductBasesAreOrthonormalEigenbases) {
    const int n = 4;
    for (int two_j : multiplet::allowed_two_j(n)) {
        for (const auto& b : multiplet::product_bases(n, two_j)) {
            const Eigen::MatrixXd gram = b.transpose() * b;
            EXPECT_LT((gram - Eigen::MatrixXd::Identity(two_j + 1, two_j + 1)).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(StateOperator, SectorLayoutCoversFullSpace) {
    for (int n = 1; n <= 10; ++n) {
        double dim = 0.0;
        for (const auto& s : sector_layout(am_system(n))) {
            dim += static_cast<double>(s.multiplicity) * static_cast<double>(s.dim);
        }
        EXPECT_EQ(dim, std::ldexp(1.0, n)) << "N = " << n;
    }
}

TEST(StateOperator, ThermalStateEigenvaluesAndNorm) {
    const double ea = 2e-5;
    const double em = 5e-5;
    const auto dicke = thermal_state(am_system(3), ea, em);
    const auto full = thermal_state(am_system(3, Representation::FullTensor), ea, em);
    EXPECT_NEAR(dicke.trace().real(), 1.0, 1e-14);
    EXPECT_NEAR(dicke.frobenius_norm(), full.frobenius_norm(), 1e-15);
    // 1/8 + ea m_A + em (m_1 + m_2)
    std::vector<double> expected;
    for (int a = 0; a < 2; ++a) {
        for (int t = 0; t < 4; ++t) {
            const double ma = a ? -0.5 : 0.5;
            const double mm = ((t & 1) ? -0.5 : 0.5) + ((t & 2) ? -0.5 : 0.5);
            expected.push_back(0.125 + ea * ma + em * mm);
        }
    }
    std::sort(expected.begin(), expected.end());
    const auto ev = dicke.eigenvalues();
    ASSERT_EQ(ev.size(), expected.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
        EXPECT_NEAR(ev[i], expected[i], 1e-15);
    }
    EXPECT_THROW(thermal_state(am_system(3), 2e-3, 0.0), std::invalid_argument);
}

TEST(StateOperator, PseudopureGuards) {
    const auto s = am_system(3);
    const Vector psi = dicke_ket(s, 0, 0);
    EXPECT_THROW(make_pseudopure(s, psi, 1.5), std::domain_error);
    EXPECT_THROW(make_pseudopure(s, 2.0 * psi, 0.1), std::domain_error);
    const auto rho = make_pseudopure(s, psi, 1e-4);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
    EXPECT_NEAR(correlation_fidelity(rho, psi), 1.0, 1e-12);
}

TEST(StateOperator, InceptPolarizationScalesByGammaRatio) {
    EXPECT_NEAR(inept_polarization(am_system(10), 1e-5), 1e-5 * kGammaH / kGammaP, 1e-18);
}

TEST(Gates, SingleRotationsMatchExplicitMatrices) {
    const auto s = am_system(2, Representation::FullTensor);
    const Matrix id = Matrix::Identity(2, 2);
    for (double phase : {0.0, 0.3, kPi / 2, 2.0}) {
        for (double angle : {kPi / 2, kPi, 1.1}) {
            const Matrix r = qubit_rotation(phase, angle);
            const auto u_c = program_unitary(s, {RotationStep{Channel::ControlOnly, phase, angle, ""}});
            const auto u_t = program_unitary(s, {RotationStep{Channel::TargetsOnly, phase, angle, ""}});
            const auto u_b = program_unitary(s, {RotationStep{Channel::Both, phase, angle, ""}});
            EXPECT_LT(max_abs(u_c - kron(r, id)), 1e-12);
            EXPECT_LT(max_abs(u_t - kron(id, r)), 1e-12);
            EXPECT_LT(max_abs(u_b - kron(r, r)), 1e-12);
        }
    }
}

TEST(Gates, CouplingEvolutionIsDiagonalPhase) {
    const auto s = am_system(2, Representation::FullTensor, 11.0);
    const double t = 0.0123;
    const Matrix u = program_unitary(s, {CouplingStep{t}});
    for (int i = 0; i < 4; ++i) {
        const double ma = (i & 2) ? -0.5 : 0.5;
        const double mm = (i & 1) ? -0.5 : 0.5;
        EXPECT_LT(std::abs(u(i, i) - std::exp(-kI * 2.0 * kPi * 11.0 * t * ma * mm)), 1e-12);
    }
    EXPECT_LT(max_abs(u - Matrix(u.diagonal().asDiagonal())), 1e-15);
}

TEST(Gates, CompositeCnotEqualsExactCnotAtTwoSpins) {
    const auto s = am_system(2, Representation::FullTensor);
    EXPECT_LT(distance_up_to_phase(program_unitary(s, cnot_program(s)), cnot_oracle(2)), 1e-10);
}

TEST(Gates, CompositeCnotExactForLargerRegisters) {
    for (int n = 3; n <= 6; ++n) {
        const auto s = am_system(n, Representation::FullTensor);
        EXPECT_LT(distance_up_to_phase(program_unitary(s, cnot_program(s)), cnot_oracle(n)), 1e-10) << "N = " << n;
    }
}

TEST(Gates, BareCompositeLeavesControlZRotation) {
    for (int n = 2; n <= 5; ++n) {
        const auto s = am_system(n, Representation::FullTensor);
        const double phi = (n - 2) * kPi / 2;
        EXPECT_NEAR(cnot_residual_phase(n), std::fmod(phi, 2 * kPi), 1e-12);
        const Eigen::Index dim = Eigen::Index(1) << n;
        Matrix rz = Matrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            rz(i, i) = std::exp(-kI * phi * (i < dim / 2 ? 0.5 : -0.5));
        }
        const Matrix bare = program_unitary(s, cnot_program(s, false));
        EXPECT_LT(distance_up_to_phase(bare, cnot_oracle(n) * rz), 1e-10) << "N = " << n;
    }
}

TEST(Gates, RandomProgramsPreserveTraceHermiticityAndSpectrum) {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 5;
        const auto s = am_system(n);
        const auto rho0 = thermal_state(s, 3e-5, 7e-5);
        const auto ev0 = rho0.eigenvalues();
        const auto rho = apply_program(rho0, random_program(rng, 8));
        ASSERT_NEAR(rho.trace().real(), 1.0, 1e-12);
        ASSERT_NEAR(rho.trace().imag(), 0.0, 1e-12);
        ASSERT_TRUE(rho.is_hermitian(1e-12));
        const auto ev = rho.eigenvalues();
        ASSERT_EQ(ev.size(), ev0.size());
        for (std::size_t i = 0; i < ev.size(); ++i) {
            ASSERT_NEAR(ev[i], ev0[i], 1e-12) << "trial " << trial;
        }
    }
}

TEST(Gates, DickeSubspaceMatchesFullTensor) {
    std::mt19937_64 rng(99);
    for (int n = 2; n <= 4; ++n) {
        const auto sd = am_system(n);
        const auto sf = am_system(n, Representation::FullTensor);
        for (int trial = 0; trial < 100; ++trial) {
            const auto program = random_program(rng, 10);
            const auto d = apply_program(thermal_state(sd, 4e-5, 9e-5), program);
            const auto f = apply_program(thermal_state(sf, 4e-5, 9e-5), program);
            ASSERT_LT(max_abs(d.to_full() - f.to_full()), 1e-10) << "N = " << n << " trial " << trial;
        }
    }
}

TEST(Gates, NoonPreparationFidelity) {
    for (int n : {2, 3, 4, 10}) {
        const auto s = am_system(n);
        const auto rho = cnot_parallel(hadamard(make_pseudopure(s, dicke_ket(s, 0, 0), 1.0)));
        const Vector noon = to_full_vector(s, noon_ket(s));
        const double f = (noon.adjoint() * rho.to_full() * noon)(0, 0).real();
        EXPECT_GT(f, 1.0 - 1e-12) << "N = " << n;
        const auto pp = cnot_parallel(hadamard(make_pseudopure(s, dicke_ket(s, 0, 0), 1e-5)));
        EXPECT_GT(correlation_fidelity(pp, noon_ket(s)), 1.0 - 1e-12);
        EXPECT_LT(coherence_orders(pp).leakage(n), 1e-12);
    }
}

TEST(Coherence, ElementOrdersFollowFlipCounts) {
    const auto s = am_system(2, Representation::FullTensor);
    const auto rho = StateOperator::identity(s);
    const auto e = element_order(rho, 0, 0, 3);
    EXPECT_EQ(e.p, 2);
    EXPECT_EQ(e.d_control, 1);
    EXPECT_EQ(e.d_targets, 1);
    EXPECT_NEAR(e.q_gamma, kGammaP + kGammaH, 1e-3);
    const auto r = element_order(rho, 0, 1, 2);  // |0 1><1 0|
    EXPECT_EQ(r.p, 0);
    EXPECT_NEAR(r.q_gamma, kGammaP - kGammaH, 1e-3);
}

TEST(Coherence, ThermalAndExcitedStates) {
    const auto s = am_system(4);
    const auto thermal = thermal_state(s, 1e-5, 2e-5);
    const auto c0 = coherence_orders(thermal);
    EXPECT_NEAR(c0.weight(0), c0.total, 1e-25);
    const auto excited = rotate(thermal, Channel::ControlOnly, axis_phase(Axis::Y), kPi / 2);
    const auto c1 = coherence_orders(excited);
    EXPECT_NEAR(c1.weight(1), c1.weight(-1), 1e-25);
    EXPECT_GT(c1.weight(1), 0.0);
    EXPECT_LT(c1.leakage(1), 1e-12);
}

TEST(Spectrum, ThermalControlMultipletIsBinomial) {
    for (int n : {1, 2, 5, 10}) {
        const auto s = am_system(n);
        const auto rho = rotate(thermal_state(s, 1e-5, 2e-5), Channel::ControlOnly, axis_phase(Axis::Y), kPi / 2);
        const auto lines = stick_spectrum(rho, SpinRole::Control);
        ASSERT_EQ(lines.size(), static_cast<std::size_t>(n));
        const double peak = binomial(n - 1, (n - 1) / 2);
        double top = 0.0;
        for (const auto& l : lines) {
            top = std::max(top, l.intensity);
        }
        for (int k = 0; k < n; ++k) {
            EXPECT_NEAR(lines[static_cast<std::size_t>(k)].offset_hz, 11.0 * (k - (n - 1) / 2.0), 1e-12);
            EXPECT_NEAR(lines[static_cast<std::size_t>(k)].intensity / top, binomial(n - 1, k) / peak, 1e-10);
        }
    }
}

TEST(Spectrum, ThermalTargetDoublet) {
    const auto s = am_system(3);
    const auto rho = rotate(thermal_state(s, 1e-5, 2e-5), Channel::TargetsOnly, axis_phase(Axis::Y), kPi / 2);
    const auto lines = stick_spectrum(rho, SpinRole::Target);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_NEAR(lines[0].offset_hz, -5.5, 1e-12);
    EXPECT_NEAR(lines[1].offset_hz, 5.5, 1e-12);
    EXPECT_NEAR(lines[0].intensity / lines[1].intensity, 1.0, 1e-10);
}
