#include "noondiff/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace noondiff {

void AttenuationCurve::validate() const {
    std::vector<double> gs;
    for (const auto& p : points) {
        if (!(p.g >= 0.0) || !std::isfinite(p.g)) {
            throw std::invalid_argument("gradient values must be finite and non-negative");
        }
        if (!std::isfinite(p.s)) {
            throw std::invalid_argument("signal values must be finite");
        }
        gs.push_back(p.g);
    }
    std::sort(gs.begin(), gs.end());
    if (std::adjacent_find(gs.begin(), gs.end()) != gs.end()) {
        throw std::invalid_argument("gradient values must be distinct");
    }
}

bool AttenuationCurve::has_sigma() const {
    return !points.empty() && std::all_of(points.begin(), points.end(), [](const CurvePoint& p) {
        return p.sigma.has_value() && *p.sigma > 0.0;
    });
}

std::vector<double> gradient_sweep(double g_max, int n_points) {
    if (n_points < 2) {
        throw std::invalid_argument("a sweep needs at least two points");
    }
    std::vector<double> g(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        g[static_cast<std::size_t>(i)] = g_max * i / (n_points - 1);
    }
    return g;
}

}  // namespace noondiff
