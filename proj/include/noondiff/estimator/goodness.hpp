#pragma once

#include <vector>

#include "noondiff/curve.hpp"
#include "noondiff/estimator/fit.hpp"

namespace noondiff::estimator {

struct GoodnessReport {
    std::vector<double> residuals;  // s_i - S0 exp(-b_i D)
    double residual_rms = 0.0;
    double r_squared_log = 1.0;     // ln s against G^2, points with s > 0
    int runs = 0;                   // sign runs of the residuals
    double runs_z = 0.0;
    // Too few sign runs (one-sided 5% level): residuals are structured,
    // e.g. a second diffusing component.
    bool runs_flag = false;
};

// Residuals within 1e-12 of the largest signal count as zero and are left
// out of the runs test.
GoodnessReport goodness_report(const AttenuationCurve& curve, const FitResult& fit);

}  // namespace noondiff::estimator
