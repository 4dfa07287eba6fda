#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "noondiff/curve.hpp"

namespace noondiff::estimator {

enum class FitMethod { LogLinear, NonlinearLS };

const char* to_string(FitMethod method);
FitMethod fit_method_from_string(const std::string& name);

struct FitOptions {
    FitMethod method = FitMethod::NonlinearLS;
    int bootstrap_samples = 0;
    std::uint64_t seed = 0;
    int max_iterations = 200;
    double xtol = 1e-10;
};

struct FitResult {
    double d_fit = 0.0;       // m^2/s
    double d_sigma = 0.0;     // m^2/s, larger of the two estimates below
    double s0_fit = 1.0;
    double residual_rms = 0.0;
    FitMethod method = FitMethod::NonlinearLS;
    int bootstrap_samples = 0;
    double d_sigma_covariance = 0.0;
    double d_sigma_bootstrap = 0.0;
    int iterations = 0;
    // d_fit * b_max < 1e-8: the curve carries no measurable decay.
    bool degenerate = false;
};

// Raised when the optimiser fails to converge.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, int iterations, double d_last, double s0_last);
    int iterations() const { return iterations_; }
    double d_last() const { return d_last_; }
    double s0_last() const { return s0_last_; }

private:
    int iterations_;
    double d_last_;
    double s0_last_;
};

// b = q^2 G^2 delta^2 (Delta - delta/3) for every point.
std::vector<double> b_values(const AttenuationCurve& curve);

// Fits S = S0 exp(-b D). Unweighted unless every point carries a positive
// sigma, then inverse-variance weighted with absolute covariance.
// Throws std::invalid_argument for fewer than 3 points or fewer than 2
// distinct nonzero gradients, std::domain_error for non-positive signals
// under LogLinear, FitError on non-convergence.
FitResult fit_diffusion(const AttenuationCurve& curve, const FitOptions& options = {});

// s_i * (1 + relative * n_i) with n_i standard normal drawn from (seed, trial).
AttenuationCurve add_multiplicative_noise(const AttenuationCurve& curve, double relative, std::uint64_t seed,
                                          std::uint32_t trial);

struct CoverageStudy {
    int trials = 0;
    int covered = 0;      // |d_fit - D| <= 3 d_sigma
    int failed = 0;       // fits that threw
    double coverage = 0.0;
    double mean_relative_sigma = 0.0;  // mean d_sigma / d_fit
    double mean_d_fit = 0.0;
};

// Repeated noisy fits of a noiseless curve generated with d_true.
CoverageStudy noise_coverage(const AttenuationCurve& truth, double d_true, double relative_noise, int trials,
                             std::uint64_t seed, const FitOptions& options = {});

}  // namespace noondiff::estimator
