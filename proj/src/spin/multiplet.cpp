#include "noondiff/spin/multiplet.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace noondiff::spin::multiplet {
namespace {

long long binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    long long r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

// sqrt(j(j+1) - m(m-1)) for the lowering step m -> m-1, in doubled units.
double lowering_coefficient(int two_j, int two_m) {
    const double v = (two_j * (two_j + 2) - two_m * (two_m - 2)) / 4.0;
    return std::sqrt(std::max(v, 0.0));
}

Eigen::MatrixXd collective_lowering(int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        for (int b = 0; b < n; ++b) {
            if (!((x >> b) & 1)) {
                out(x | (Eigen::Index{1} << b), x) += 1.0;
            }
        }
    }
    return out;
}

}  // namespace

int multiplicity(int n_targets, int two_j) {
    if (two_j < 0 || two_j > n_targets || (n_targets - two_j) % 2 != 0) {
        return 0;
    }
    const int k = (n_targets - two_j) / 2;
    return static_cast<int>(binomial(n_targets, k) - binomial(n_targets, k - 1));
}

std::vector<int> allowed_two_j(int n_targets) {
    std::vector<int> out;
    for (int two_j = n_targets; two_j >= 0; two_j -= 2) {
        out.push_back(two_j);
    }
    return out;
}

Eigen::MatrixXd lowering(int two_j) {
    const int d = two_j + 1;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
    for (int idx = 0; idx + 1 < d; ++idx) {
        const int two_m = two_j - 2 * idx;
        out(idx + 1, idx) = lowering_coefficient(two_j, two_m);
    }
    return out;
}

Eigen::MatrixXd raising(int two_j) { return lowering(two_j).transpose(); }

Eigen::MatrixXd z_projection(int two_j) {
    const int d = two_j + 1;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
    for (int idx = 0; idx < d; ++idx) {
        out(idx, idx) = (two_j - 2 * idx) / 2.0;
    }
    return out;
}

std::vector<Eigen::MatrixXd> product_bases(int n_targets, int two_j) {
    if (n_targets > 16) {
        throw std::invalid_argument("product basis embedding limited to 16 targets");
    }
    const int copies = multiplicity(n_targets, two_j);
    if (copies == 0) {
        return {};
    }
    const Eigen::Index dim = Eigen::Index{1} << n_targets;
    const int k = (n_targets - two_j) / 2;  // flips of the highest-weight state

    std::vector<Eigen::Index> level;
    for (Eigen::Index x = 0; x < dim; ++x) {
        if (std::popcount(static_cast<unsigned long long>(x)) == k) {
            level.push_back(x);
        }
    }

    const Eigen::MatrixXd lower = collective_lowering(n_targets);
    const Eigen::MatrixXd raise = lower.transpose();

    // Highest-weight states: kernel of J+ inside the k-flip level.
    Eigen::MatrixXd restricted(dim, static_cast<Eigen::Index>(level.size()));
    for (std::size_t c = 0; c < level.size(); ++c) {
        restricted.col(static_cast<Eigen::Index>(c)) = raise.col(level[c]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted.transpose() * restricted);
    // Eigenvalues ascending; the kernel is the first `copies` vectors.
    std::vector<Eigen::MatrixXd> out;
    out.reserve(copies);
    for (int c = 0; c < copies; ++c) {
        Eigen::VectorXd top = Eigen::VectorXd::Zero(dim);
        for (std::size_t r = 0; r < level.size(); ++r) {
            top(level[r]) = solver.eigenvectors()(static_cast<Eigen::Index>(r), c);
        }
        Eigen::MatrixXd basis(dim, two_j + 1);
        basis.col(0) = top;
        for (int idx = 0; idx < two_j; ++idx) {
            const int two_m = two_j - 2 * idx;
            basis.col(idx + 1) = lower * basis.col(idx) / lowering_coefficient(two_j, two_m);
        }
        out.push_back(std::move(basis));
    }
    return out;
}

}  // namespace noondiff::spin::multiplet
