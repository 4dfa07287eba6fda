#include "noondiff/spin/gates.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "noondiff/spin/multiplet.hpp"

namespace noondiff::spin {
namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2cd half_rotation(double phase, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const Complex i{0.0, 1.0};
    Eigen::Matrix2cd r;
    // -i sin(angle/2) (cos(phase) sigma_x + sin(phase) sigma_y)
    r(0, 0) = c;
    r(1, 1) = c;
    r(0, 1) = -i * s * std::exp(Complex{0.0, -phase});
    r(1, 0) = -i * s * std::exp(Complex{0.0, phase});
    return r;
}

// Left-multiplies rows of `m` by a 2x2 gate acting on bit `bit`.
void apply_qubit_left(Matrix& m, int bit, const Eigen::Matrix2cd& g) {
    const Eigen::Index mask = Eigen::Index{1} << bit;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r & mask) {
            continue;
        }
        const Eigen::Index r1 = r | mask;
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const Complex x0 = m(r, c);
            const Complex x1 = m(r1, c);
            m(r, c) = g(0, 0) * x0 + g(0, 1) * x1;
            m(r1, c) = g(1, 0) * x0 + g(1, 1) * x1;
        }
    }
}

void apply_full_rotation(Matrix& m, int n_targets, Channel channel, const Eigen::Matrix2cd& g) {
    if (channel != Channel::TargetsOnly) {
        apply_qubit_left(m, n_targets, g);
    }
    if (channel != Channel::ControlOnly) {
        for (int b = 0; b < n_targets; ++b) {
            apply_qubit_left(m, b, g);
        }
    }
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

double coupling_energy(const SpinSystemSpec& spec, const BasisLabel& lab) {
    const double n = spec.n_targets();
    return 2.0 * kPi * spec.j_coupling * (0.5 - lab.control) * (n / 2.0 - lab.flips);
}

}  // namespace

double axis_phase(Axis axis) {
    switch (axis) {
        case Axis::X:
            return 0.0;
        case Axis::Y:
            return kPi / 2.0;
        case Axis::MinusX:
            return kPi;
        case Axis::MinusY:
            return 3.0 * kPi / 2.0;
    }
    throw std::invalid_argument("unknown axis");
}

Matrix multiplet_rotation(int two_j, double phase, double angle) {
    const Eigen::MatrixXd lower = multiplet::lowering(two_j);
    const Eigen::MatrixXd raise = lower.transpose();
    // cos(phase) I_x + sin(phase) I_y = (e^{-i phase} J+ + e^{i phase} J-) / 2
    const Matrix h = 0.5 * (std::exp(Complex{0.0, -phase}) * raise.cast<Complex>() +
                            std::exp(Complex{0.0, phase}) * lower.cast<Complex>());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const Eigen::VectorXcd ph =
        (solver.eigenvalues().cast<Complex>() * Complex{0.0, -angle}).array().exp().matrix();
    return solver.eigenvectors() * ph.asDiagonal() * solver.eigenvectors().adjoint();
}

StateOperator rotate(const StateOperator& state, Channel channel, double phase, double angle) {
    if (angle == 0.0) {
        return state;
    }
    const SpinSystemSpec& spec = state.spec();
    const int n = spec.n_targets();
    const Eigen::Matrix2cd g = half_rotation(phase, angle);
    std::vector<Sector> sectors = state.sectors();

    if (state.representation() == Representation::FullTensor) {
        Matrix& rho = sectors.front().rho;
        apply_full_rotation(rho, n, channel, g);
        Matrix t = rho.adjoint();
        apply_full_rotation(t, n, channel, g);
        rho = t.adjoint();
        return StateOperator(spec, std::move(sectors));
    }

    const Matrix id2 = Matrix::Identity(2, 2);
    for (auto& sec : sectors) {
        const int d = sec.two_j + 1;
        const Matrix ctrl = channel == Channel::TargetsOnly ? id2 : Matrix(g);
        const Matrix targ = channel == Channel::ControlOnly ? Matrix(Matrix::Identity(d, d))
                                                           : multiplet_rotation(sec.two_j, phase, angle);
        const Matrix u = kron(ctrl, targ);
        sec.rho = u * sec.rho * u.adjoint();
    }
    return StateOperator(spec, std::move(sectors));
}

StateOperator collective_rotation(const StateOperator& state, Channel channel, Axis axis, double angle) {
    return rotate(state, channel, axis_phase(axis), angle);
}

StateOperator j_evolution(const StateOperator& state, double duration) {
    if (duration < 0.0) {
        throw std::invalid_argument("evolution duration must be non-negative");
    }
    if (duration == 0.0 || state.spec().n_targets() == 0) {
        return state;
    }
    const SpinSystemSpec& spec = state.spec();
    std::vector<Sector> sectors = state.sectors();
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        const Eigen::Index dim = sectors[s].rho.rows();
        Vector phase(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            phase(i) = std::exp(Complex{0.0, -coupling_energy(spec, state.label(s, i)) * duration});
        }
        sectors[s].rho = phase.asDiagonal() * sectors[s].rho * phase.conjugate().asDiagonal();
    }
    return StateOperator(spec, std::move(sectors));
}

double cnot_residual_phase(int n_total) {
    const double phi = std::fmod((n_total - 2) * kPi / 2.0, 2.0 * kPi);
    return phi < 0.0 ? phi + 2.0 * kPi : phi;
}

std::vector<GateStep> cnot_program(const SpinSystemSpec& spec, bool exact) {
    if (spec.n_total < 2) {
        throw std::invalid_argument("CNOT needs at least one target spin");
    }
    const double tau = 1.0 / (4.0 * spec.j_coupling);
    const double h = kPi / 2.0;
    const double x = axis_phase(Axis::X);
    const double y = axis_phase(Axis::Y);
    const double mx = axis_phase(Axis::MinusX);
    const double my = axis_phase(Axis::MinusY);
    std::vector<GateStep> p{
        RotationStep{Channel::TargetsOnly, mx, h, "xbar_m"},
        RotationStep{Channel::TargetsOnly, my, h, "ybar_m1"},
        RotationStep{Channel::ControlOnly, y, h, "y_a"},
        RotationStep{Channel::ControlOnly, mx, h, "xbar_a"},
        RotationStep{Channel::ControlOnly, my, h, "ybar_a"},
        CouplingStep{tau},
        RotationStep{Channel::Both, y, kPi, "y2_am"},
        CouplingStep{tau},
        RotationStep{Channel::TargetsOnly, my, h, "ybar_m2"},
        RotationStep{Channel::ControlOnly, y, kPi, "y2_a"},
    };
    const double residual = cnot_residual_phase(spec.n_total);
    if (exact && std::abs(residual) > 1e-12 && std::abs(residual - 2.0 * kPi) > 1e-12) {
        // X_A Y_A(-phi) Xbar_A = exp(+i phi I_z^A)
        p.push_back(RotationStep{Channel::ControlOnly, mx, h, "zfix_xbar"});
        p.push_back(RotationStep{Channel::ControlOnly, y, -residual, "zfix_y"});
        p.push_back(RotationStep{Channel::ControlOnly, x, h, "zfix_x"});
    }
    return p;
}

StateOperator apply_step(const StateOperator& state, const GateStep& step) {
    if (const auto* r = std::get_if<RotationStep>(&step)) {
        return rotate(state, r->channel, r->phase, r->angle);
    }
    return j_evolution(state, std::get<CouplingStep>(step).duration);
}

StateOperator apply_program(const StateOperator& state, const std::vector<GateStep>& program) {
    StateOperator out = state;
    for (const auto& step : program) {
        out = apply_step(out, step);
    }
    return out;
}

StateOperator cnot_parallel(const StateOperator& state) {
    return apply_program(state, cnot_program(state.spec()));
}

Matrix program_unitary(const SpinSystemSpec& spec, const std::vector<GateStep>& program) {
    if (spec.n_total > SpinSystemSpec::kMaxFullTensorSpins) {
        throw std::invalid_argument("full unitary limited to 12 spins");
    }
    const int n = spec.n_targets();
    const Eigen::Index dim = Eigen::Index{1} << spec.n_total;
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto& step : program) {
        if (const auto* r = std::get_if<RotationStep>(&step)) {
            apply_full_rotation(u, n, r->channel, half_rotation(r->phase, r->angle));
            continue;
        }
        const double t = std::get<CouplingStep>(step).duration;
        const auto mask = (Eigen::Index{1} << n) - 1;
        for (Eigen::Index i = 0; i < dim; ++i) {
            const BasisLabel lab{static_cast<int>(i >> n),
                                 std::popcount(static_cast<unsigned long long>(i & mask))};
            u.row(i) *= std::exp(Complex{0.0, -coupling_energy(spec, lab) * t});
        }
    }
    return u;
}

}  // namespace noondiff::spin
