#include "noondiff/estimator/goodness.hpp"

#include <algorithm>
#include <cmath>

namespace noondiff::estimator {

GoodnessReport goodness_report(const AttenuationCurve& curve, const FitResult& fit) {
    GoodnessReport rep;
    const auto b = b_values(curve);
    double smax = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const double r = curve.points[i].s - fit.s0_fit * std::exp(-b[i] * fit.d_fit);
        rep.residuals.push_back(r);
        sq += r * r;
        smax = std::max(smax, std::abs(curve.points[i].s));
    }
    rep.residual_rms = rep.residuals.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(rep.residuals.size()));

    // ln s against G^2
    std::vector<double> xs, ys;
    for (const auto& p : curve.points) {
        if (p.s > 0.0) {
            xs.push_back(p.g * p.g);
            ys.push_back(std::log(p.s));
        }
    }
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= n;
        my /= n;
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
            syy += (ys[i] - my) * (ys[i] - my);
        }
        if (syy > 0.0 && sxx > 0.0) {
            const double slope = sxy / sxx;
            double ss_res = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double e = ys[i] - (my + slope * (xs[i] - mx));
                ss_res += e * e;
            }
            rep.r_squared_log = 1.0 - ss_res / syy;
        }
    }

    // Wald-Wolfowitz runs test on residual signs.
    std::vector<int> signs;
    const double zero = 1e-12 * smax;
    for (double r : rep.residuals) {
        if (std::abs(r) > zero) {
            signs.push_back(r > 0.0 ? 1 : -1);
        }
    }
    const double n1 = static_cast<double>(std::count(signs.begin(), signs.end(), 1));
    const double n2 = static_cast<double>(signs.size()) - n1;
    if (!signs.empty()) {
        rep.runs = 1;
        for (std::size_t i = 1; i < signs.size(); ++i) {
            if (signs[i] != signs[i - 1]) {
                ++rep.runs;
            }
        }
    }
    const double n = n1 + n2;
    if (n1 > 0.0 && n2 > 0.0 && n > 1.0) {
        const double mean = 2.0 * n1 * n2 / n + 1.0;
        const double var = 2.0 * n1 * n2 * (2.0 * n1 * n2 - n) / (n * n * (n - 1.0));
        if (var > 0.0) {
            rep.runs_z = (rep.runs - mean) / std::sqrt(var);
            rep.runs_flag = rep.runs_z < -1.645;
        }
    } else if (n >= 8.0) {
        // every residual on one side of the model
        rep.runs_z = -INFINITY;
        rep.runs_flag = true;
    }
    return rep;
}

}  // namespace noondiff::estimator
