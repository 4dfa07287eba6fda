#pragma once

#include <vector>

#include <Eigen/Dense>

// Decomposition of n equivalent spin-1/2 targets into total-spin multiplets.
// Used to build the collective representation and to embed it back into the
// 2^n product basis.
namespace noondiff::spin::multiplet {

// Number of copies of the spin-j multiplet among n spins-1/2 (two_j = 2j).
int multiplicity(int n_targets, int two_j);

// Allowed 2j values for n spins, largest first.
std::vector<int> allowed_two_j(int n_targets);

// Spin-j lowering operator in the basis ordered m = j, j-1, ..., -j.
Eigen::MatrixXd lowering(int two_j);
Eigen::MatrixXd raising(int two_j);
Eigen::MatrixXd z_projection(int two_j);

// Orthonormal bases of every copy of the spin-j multiplet inside the 2^n
// product space, each 2^n x (2j+1) with columns |j, m> for m = j .. -j in the
// Condon-Shortley phase convention. Target qubit t is bit (n-1-t); bit value 1
// is a flipped (spin-down) target.
std::vector<Eigen::MatrixXd> product_bases(int n_targets, int two_j);

}  // namespace noondiff::spin::multiplet
