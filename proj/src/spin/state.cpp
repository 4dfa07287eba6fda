#include "noondiff/spin/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "noondiff/spin/multiplet.hpp"

namespace noondiff::spin {

std::vector<SectorShape> sector_layout(const SpinSystemSpec& spec) {
    const int n = spec.n_targets();
    if (spec.representation == Representation::FullTensor) {
        return {SectorShape{-1, 1, Eigen::Index{1} << spec.n_total}};
    }
    std::vector<SectorShape> out;
    for (int two_j : multiplet::allowed_two_j(n)) {
        out.push_back(SectorShape{two_j, multiplet::multiplicity(n, two_j), 2 * (two_j + 1)});
    }
    return out;
}

StateOperator::StateOperator(SpinSystemSpec spec, std::vector<Sector> sectors)
    : spec_(std::move(spec)), sectors_(std::move(sectors)) {
    const auto layout = sector_layout(spec_);
    if (layout.size() != sectors_.size()) {
        throw std::invalid_argument("sector count does not match the spin system representation");
    }
    for (std::size_t s = 0; s < layout.size(); ++s) {
        const auto& sec = sectors_[s];
        if (sec.two_j != layout[s].two_j || sec.multiplicity != layout[s].multiplicity ||
            sec.rho.rows() != layout[s].dim || sec.rho.cols() != layout[s].dim) {
            throw std::invalid_argument("sector shape does not match the spin system representation");
        }
    }
}

StateOperator StateOperator::zero(const SpinSystemSpec& spec) {
    std::vector<Sector> sectors;
    for (const auto& shape : sector_layout(spec)) {
        sectors.push_back(Sector{shape.two_j, shape.multiplicity, Matrix::Zero(shape.dim, shape.dim)});
    }
    return StateOperator(spec, std::move(sectors));
}

StateOperator StateOperator::identity(const SpinSystemSpec& spec) {
    std::vector<Sector> sectors;
    for (const auto& shape : sector_layout(spec)) {
        sectors.push_back(Sector{shape.two_j, shape.multiplicity, Matrix::Identity(shape.dim, shape.dim)});
    }
    return StateOperator(spec, std::move(sectors));
}

BasisLabel StateOperator::label(std::size_t sector, Eigen::Index index) const {
    const int n = spec_.n_targets();
    const auto& sec = sectors_.at(sector);
    if (sec.two_j < 0) {
        const auto mask = (Eigen::Index{1} << n) - 1;
        return BasisLabel{static_cast<int>(index >> n),
                          std::popcount(static_cast<unsigned long long>(index & mask))};
    }
    const int d = sec.two_j + 1;
    const int a = static_cast<int>(index / d);
    const int idx = static_cast<int>(index % d);
    return BasisLabel{a, (n - sec.two_j) / 2 + idx};
}

Complex StateOperator::trace() const {
    Complex t{0.0, 0.0};
    for (const auto& sec : sectors_) {
        t += static_cast<double>(sec.multiplicity) * sec.rho.trace();
    }
    return t;
}

double StateOperator::frobenius_norm() const {
    double sq = 0.0;
    for (const auto& sec : sectors_) {
        sq += sec.multiplicity * sec.rho.squaredNorm();
    }
    return std::sqrt(sq);
}

bool StateOperator::is_hermitian(double tol) const {
    for (const auto& sec : sectors_) {
        if ((sec.rho - sec.rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
            return false;
        }
    }
    return true;
}

std::vector<double> StateOperator::eigenvalues() const {
    std::vector<double> out;
    for (const auto& sec : sectors_) {
        const Matrix herm = 0.5 * (sec.rho + sec.rho.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            out.insert(out.end(), static_cast<std::size_t>(sec.multiplicity), solver.eigenvalues()(i));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double StateOperator::min_eigenvalue() const {
    const auto ev = eigenvalues();
    return ev.empty() ? 0.0 : ev.front();
}

StateOperator StateOperator::deviation() const {
    const Complex shift = trace() / spec_.full_dimension();
    StateOperator out = *this;
    for (auto& sec : out.sectors_) {
        sec.rho.diagonal().array() -= shift;
    }
    return out;
}

Matrix StateOperator::to_full() const {
    if (spec_.n_total > SpinSystemSpec::kMaxFullTensorSpins) {
        throw std::invalid_argument("full matrix limited to 12 spins");
    }
    if (representation() == Representation::FullTensor) {
        return sectors_.front().rho;
    }
    const int n = spec_.n_targets();
    const Eigen::Index half = Eigen::Index{1} << n;
    Matrix full = Matrix::Zero(2 * half, 2 * half);
    for (const auto& sec : sectors_) {
        const int d = sec.two_j + 1;
        for (const auto& basis : multiplet::product_bases(n, sec.two_j)) {
            Matrix embed = Matrix::Zero(2 * half, 2 * d);
            embed.block(0, 0, half, d) = basis.cast<Complex>();
            embed.block(half, d, half, d) = basis.cast<Complex>();
            full += embed * sec.rho * embed.adjoint();
        }
    }
    return full;
}

void StateOperator::check_compatible(const StateOperator& other) const {
    if (other.representation() != representation() || other.spec_.n_total != spec_.n_total) {
        throw std::invalid_argument("states belong to different representations");
    }
}

StateOperator& StateOperator::operator+=(const StateOperator& other) {
    check_compatible(other);
    for (std::size_t s = 0; s < sectors_.size(); ++s) {
        sectors_[s].rho += other.sectors_[s].rho;
    }
    return *this;
}

StateOperator& StateOperator::operator*=(Complex factor) {
    for (auto& sec : sectors_) {
        sec.rho *= factor;
    }
    return *this;
}

Complex hs_inner(const StateOperator& a, const StateOperator& b) {
    if (a.representation() != b.representation() || a.spec().n_total != b.spec().n_total) {
        throw std::invalid_argument("states belong to different representations");
    }
    Complex acc{0.0, 0.0};
    for (std::size_t s = 0; s < a.sectors().size(); ++s) {
        const auto& sa = a.sectors()[s];
        const auto& sb = b.sectors()[s];
        acc += static_cast<double>(sa.multiplicity) * (sa.rho.adjoint() * sb.rho).trace();
    }
    return acc;
}

double frobenius_distance(const StateOperator& a, const StateOperator& b) {
    return (a - b).frobenius_norm();
}

Eigen::Index pure_state_dimension(const SpinSystemSpec& spec) {
    return sector_layout(spec).front().dim;
}

Vector dicke_ket(const SpinSystemSpec& spec, int control, int flips) {
    const int n = spec.n_targets();
    if (control < 0 || control > 1 || flips < 0 || flips > n) {
        throw std::out_of_range("basis ket label out of range");
    }
    const Eigen::Index dim = pure_state_dimension(spec);
    Vector psi = Vector::Zero(dim);
    if (spec.representation == Representation::DickeSubspace) {
        psi(control * (n + 1) + flips) = 1.0;
        return psi;
    }
    const Eigen::Index half = Eigen::Index{1} << n;
    for (Eigen::Index x = 0; x < half; ++x) {
        if (std::popcount(static_cast<unsigned long long>(x)) == flips) {
            psi(control * half + x) = 1.0;
        }
    }
    psi.normalize();
    return psi;
}

Vector noon_ket(const SpinSystemSpec& spec) {
    return (dicke_ket(spec, 0, 0) + dicke_ket(spec, 1, spec.n_targets())) / std::sqrt(2.0);
}

Vector to_full_vector(const SpinSystemSpec& spec, const Vector& psi) {
    if (spec.representation == Representation::FullTensor) {
        return psi;
    }
    const int n = spec.n_targets();
    const Eigen::Index half = Eigen::Index{1} << n;
    const Eigen::MatrixXd top = multiplet::product_bases(n, n).front();
    Vector out = Vector::Zero(2 * half);
    out.head(half) = top.cast<Complex>() * psi.head(n + 1);
    out.tail(half) = top.cast<Complex>() * psi.tail(n + 1);
    return out;
}

StateOperator make_pseudopure(const SpinSystemSpec& spec, const Vector& psi, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw std::domain_error("pseudopure purity must lie in [0, 1]");
    }
    if (psi.size() != pure_state_dimension(spec)) {
        throw std::invalid_argument("ket dimension does not match the representation");
    }
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
        throw std::domain_error("pseudopure ket must be normalised");
    }
    StateOperator out = StateOperator::identity(spec) * Complex{(1.0 - epsilon) / spec.full_dimension(), 0.0};
    std::vector<Sector> sectors = out.sectors();
    sectors.front().rho += epsilon * (psi * psi.adjoint());
    return StateOperator(spec, std::move(sectors));
}

StateOperator thermal_state(const SpinSystemSpec& spec, double eps_control, double eps_target) {
    if (std::abs(eps_control) > 1e-3 || std::abs(eps_target) > 1e-3) {
        throw std::invalid_argument("thermal polarisations must be in the high-temperature regime (|eps| <= 1e-3)");
    }
    StateOperator out = StateOperator::zero(spec);
    std::vector<Sector> sectors = out.sectors();
    const double base = 1.0 / spec.full_dimension();
    const int n = spec.n_targets();
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        for (Eigen::Index i = 0; i < sectors[s].rho.rows(); ++i) {
            const BasisLabel lab = out.label(s, i);
            const double iz_a = 0.5 - lab.control;
            const double iz_m = 0.5 * n - lab.flips;
            sectors[s].rho(i, i) = base + eps_control * iz_a + eps_target * iz_m;
        }
    }
    return StateOperator(spec, std::move(sectors));
}

double inept_polarization(const SpinSystemSpec& spec, double eps_control) {
    return eps_control * std::abs(spec.target.gamma / spec.control.gamma);
}

double correlation_fidelity(const StateOperator& rho, const Vector& psi) {
    const SpinSystemSpec& spec = rho.spec();
    std::vector<Sector> sectors = StateOperator::zero(spec).sectors();
    sectors.front().rho = psi * psi.adjoint();
    const StateOperator target_dev = StateOperator(spec, std::move(sectors)).deviation();
    const StateOperator dev = rho.deviation();
    const double norm = dev.frobenius_norm() * target_dev.frobenius_norm();
    if (norm == 0.0) {
        return 0.0;
    }
    return hs_inner(dev, target_dev).real() / norm;
}

}  // namespace noondiff::spin
