#pragma once

#include <map>
#include <utility>
#include <vector>

#include "noondiff/spin/state.hpp"

namespace noondiff::spin {

// Order labels of the element |row><col|. p counts flipped spins of the
// column minus those of the row; q_gamma weights each flip by its nuclide.
struct ElementOrder {
    int p = 0;
    int d_control = 0;
    int d_targets = 0;
    double q_gamma = 0.0;
};

ElementOrder element_order(const StateOperator& state, std::size_t sector, Eigen::Index row, Eigen::Index col);

// Matrix of orders p for one sector.
Eigen::MatrixXi order_map(const StateOperator& state, std::size_t sector);

struct CoherenceDecomposition {
    // Squared-norm weight (full-space, multiplicity included) per order p.
    std::map<int, double> by_order;
    // Same weight keyed by (d_control, d_targets).
    std::map<std::pair<int, int>, double> by_key;
    double total = 0.0;

    double weight(int p) const;
    // Largest weight among orders other than p and -p and 0, relative to the
    // combined weight at +-p.
    double leakage(int p) const;
};

// Decomposition of the traceless deviation part of the state.
CoherenceDecomposition coherence_orders(const StateOperator& state);

}  // namespace noondiff::spin
