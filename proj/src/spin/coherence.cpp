#include "noondiff/spin/coherence.hpp"

#include <algorithm>
#include <cmath>

namespace noondiff::spin {

ElementOrder element_order(const StateOperator& state, std::size_t sector, Eigen::Index row, Eigen::Index col) {
    const BasisLabel r = state.label(sector, row);
    const BasisLabel c = state.label(sector, col);
    ElementOrder o;
    o.d_control = c.control - r.control;
    o.d_targets = c.flips - r.flips;
    o.p = o.d_control + o.d_targets;
    o.q_gamma = state.spec().control.gamma * o.d_control + state.spec().target.gamma * o.d_targets;
    return o;
}

Eigen::MatrixXi order_map(const StateOperator& state, std::size_t sector) {
    const Eigen::Index dim = state.sectors().at(sector).rho.rows();
    Eigen::MatrixXi out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            out(r, c) = element_order(state, sector, r, c).p;
        }
    }
    return out;
}

double CoherenceDecomposition::weight(int p) const {
    const auto it = by_order.find(p);
    return it == by_order.end() ? 0.0 : it->second;
}

double CoherenceDecomposition::leakage(int p) const {
    const double wanted = weight(p) + (p == 0 ? 0.0 : weight(-p));
    double worst = 0.0;
    for (const auto& [order, w] : by_order) {
        if (order != p && order != -p && order != 0) {
            worst = std::max(worst, w);
        }
    }
    if (wanted == 0.0) {
        return worst == 0.0 ? 0.0 : INFINITY;
    }
    return worst / wanted;
}

CoherenceDecomposition coherence_orders(const StateOperator& state) {
    const StateOperator dev = state.deviation();
    CoherenceDecomposition out;
    for (std::size_t s = 0; s < dev.sectors().size(); ++s) {
        const Sector& sec = dev.sectors()[s];
        for (Eigen::Index r = 0; r < sec.rho.rows(); ++r) {
            for (Eigen::Index c = 0; c < sec.rho.cols(); ++c) {
                const double w = sec.multiplicity * std::norm(sec.rho(r, c));
                if (w == 0.0) {
                    continue;
                }
                const ElementOrder o = element_order(dev, s, r, c);
                out.by_order[o.p] += w;
                out.by_key[{o.d_control, o.d_targets}] += w;
                out.total += w;
            }
        }
    }
    return out;
}

}  // namespace noondiff::spin
