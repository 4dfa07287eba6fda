#include "noondiff/estimator/fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "noondiff/diffusion/rng.hpp"

namespace noondiff::estimator {
namespace {

struct Samples {
    std::vector<double> b;
    std::vector<double> s;
    std::vector<double> w;  // weights on residuals squared; 1 when unweighted
    bool weighted = false;
};

struct CoreFit {
    double d = 0.0;
    double s0 = 1.0;
    double sigma = 0.0;
    double rms = 0.0;
    int iterations = 0;
};

void check_samples(const Samples& x, const std::vector<double>& g) {
    if (x.b.size() < 3) {
        throw std::invalid_argument("fit needs at least 3 points");
    }
    std::set<double> nonzero;
    for (double v : g) {
        if (v > 0.0) {
            nonzero.insert(v);
        }
    }
    if (nonzero.size() < 2) {
        throw std::invalid_argument("fit needs at least 2 distinct nonzero gradients");
    }
}

double rms_of(const Samples& x, double s0, double d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.b.size(); ++i) {
        const double r = x.s[i] - s0 * std::exp(-x.b[i] * d);
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(x.b.size()));
}

// ln s = ln S0 - b D by (weighted) linear regression. `clip` replaces
// non-positive s by the smallest positive one instead of failing.
CoreFit log_linear(const Samples& x, bool clip) {
    double smallest = INFINITY;
    for (double v : x.s) {
        if (v > 0.0) {
            smallest = std::min(smallest, v);
        }
    }
    const std::size_t n = x.b.size();
    Eigen::MatrixXd a(n, 2);
    Eigen::VectorXd y(n);
    Eigen::VectorXd w(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = x.s[i];
        if (!(s > 0.0)) {
            if (!clip || !std::isfinite(smallest)) {
                throw std::domain_error("log-linear fit needs strictly positive signals");
            }
            s = smallest;
        }
        a(static_cast<Eigen::Index>(i), 0) = 1.0;
        a(static_cast<Eigen::Index>(i), 1) = -x.b[i];
        y(static_cast<Eigen::Index>(i)) = std::log(s);
        // Var(ln s) = (sigma / s)^2
        w(static_cast<Eigen::Index>(i)) = x.weighted ? x.w[i] * s * s : 1.0;
    }
    const Eigen::MatrixXd aw = w.cwiseSqrt().asDiagonal() * a;
    const Eigen::VectorXd yw = w.cwiseSqrt().asDiagonal() * y;
    const Eigen::Vector2d beta = aw.colPivHouseholderQr().solve(yw);
    const Eigen::Matrix2d info = aw.transpose() * aw;
    const Eigen::Matrix2d inv = info.inverse();
    const double rss = (yw - aw * beta).squaredNorm();
    const double scale = x.weighted ? 1.0 : rss / static_cast<double>(n - 2);
    CoreFit out;
    out.s0 = std::exp(beta(0));
    out.d = beta(1);
    out.sigma = std::sqrt(std::max(0.0, scale * inv(1, 1)));
    return out;
}

struct ExpFunctor : Eigen::DenseFunctor<double> {
    ExpFunctor(const Samples& x, double b_scale)
        : Eigen::DenseFunctor<double>(2, static_cast<int>(x.b.size())), x_(x), b_scale_(b_scale) {}

    // p = (S0, D * b_scale)
    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
        for (std::size_t i = 0; i < x_.b.size(); ++i) {
            const double model = p(0) * std::exp(-x_.b[i] / b_scale_ * p(1));
            f(static_cast<Eigen::Index>(i)) = std::sqrt(x_.w[i]) * (model - x_.s[i]);
        }
        return 0;
    }

    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
        for (std::size_t i = 0; i < x_.b.size(); ++i) {
            const double u = x_.b[i] / b_scale_;
            const double e = std::exp(-u * p(1));
            const double sw = std::sqrt(x_.w[i]);
            j(static_cast<Eigen::Index>(i), 0) = sw * e;
            j(static_cast<Eigen::Index>(i), 1) = -sw * p(0) * u * e;
        }
        return 0;
    }

    const Samples& x_;
    double b_scale_;
};

CoreFit nonlinear(const Samples& x, const FitOptions& options) {
    const CoreFit start = log_linear(x, true);
    const double b_max = *std::max_element(x.b.begin(), x.b.end());
    const double b_scale = b_max > 0.0 ? b_max : 1.0;

    ExpFunctor f(x, b_scale);
    Eigen::LevenbergMarquardt<ExpFunctor> lm(f);
    lm.setXtol(options.xtol);
    lm.setFtol(1e-14);
    lm.setMaxfev(options.max_iterations);
    Eigen::VectorXd p(2);
    p << start.s0, std::max(start.d, 0.0) * b_scale;
    const auto status = lm.minimize(p);
    if (status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation ||
        status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters || !p.allFinite()) {
        throw FitError("nonlinear least squares did not converge", static_cast<int>(lm.iterations()),
                       p(1) / b_scale, p(0));
    }

    CoreFit out;
    out.s0 = p(0);
    out.d = p(1) / b_scale;
    out.iterations = static_cast<int>(lm.iterations());

    // Covariance in physical units.
    const std::size_t n = x.b.size();
    Eigen::MatrixXd jac(n, 2);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::exp(-x.b[i] * out.d);
        const double sw = std::sqrt(x.w[i]);
        jac(static_cast<Eigen::Index>(i), 0) = sw * e;
        jac(static_cast<Eigen::Index>(i), 1) = -sw * out.s0 * x.b[i] * e;
        const double r = sw * (out.s0 * e - x.s[i]);
        rss += r * r;
    }
    const Eigen::Matrix2d info = jac.transpose() * jac;
    const double scale = x.weighted ? 1.0 : rss / static_cast<double>(n - 2);
    const Eigen::Matrix2d inv = info.inverse();
    out.sigma = std::sqrt(std::max(0.0, scale * inv(1, 1)));
    return out;
}

CoreFit fit_core(const Samples& x, const FitOptions& options) {
    CoreFit out = options.method == FitMethod::LogLinear ? log_linear(x, false) : nonlinear(x, options);
    out.rms = rms_of(x, out.s0, out.d);
    return out;
}

Samples samples_of(const AttenuationCurve& curve) {
    Samples x;
    x.b = b_values(curve);
    x.weighted = curve.has_sigma();
    for (const auto& p : curve.points) {
        x.s.push_back(p.s);
        x.w.push_back(x.weighted ? 1.0 / (*p.sigma * *p.sigma) : 1.0);
    }
    return x;
}

}  // namespace

const char* to_string(FitMethod method) {
    return method == FitMethod::LogLinear ? "LogLinear" : "NonlinearLS";
}

FitMethod fit_method_from_string(const std::string& name) {
    if (name == "LogLinear") {
        return FitMethod::LogLinear;
    }
    if (name == "NonlinearLS") {
        return FitMethod::NonlinearLS;
    }
    throw std::invalid_argument("unknown fit method '" + name + "'");
}

FitError::FitError(const std::string& what, int iterations, double d_last, double s0_last)
    : std::runtime_error(what + " (iterations " + std::to_string(iterations) + ", D " + std::to_string(d_last) +
                         ", S0 " + std::to_string(s0_last) + ")"),
      iterations_(iterations),
      d_last_(d_last),
      s0_last_(s0_last) {}

std::vector<double> b_values(const AttenuationCurve& curve) {
    std::vector<double> b;
    const double k = curve.q_gamma * curve.little_delta;
    const double t = curve.big_delta - curve.little_delta / 3.0;
    for (const auto& p : curve.points) {
        const double q = k * p.g;
        b.push_back(q * q * t);
    }
    return b;
}

FitResult fit_diffusion(const AttenuationCurve& curve, const FitOptions& options) {
    curve.validate();
    if (!(curve.little_delta > 0.0) || curve.big_delta < curve.little_delta || curve.q_gamma == 0.0) {
        throw std::domain_error("curve timing must satisfy Delta >= delta > 0 with nonzero q_gamma");
    }
    const Samples x = samples_of(curve);
    std::vector<double> g;
    for (const auto& p : curve.points) {
        g.push_back(p.g);
    }
    check_samples(x, g);

    const CoreFit best = fit_core(x, options);
    FitResult r;
    r.method = options.method;
    r.s0_fit = best.s0;
    r.d_fit = std::max(best.d, 0.0);
    r.residual_rms = best.rms;
    r.iterations = best.iterations;
    r.d_sigma_covariance = best.sigma;
    r.bootstrap_samples = options.bootstrap_samples;
    const double b_max = *std::max_element(x.b.begin(), x.b.end());
    r.degenerate = r.d_fit * b_max < 1e-8;

    if (options.bootstrap_samples > 1) {
        const auto key = diffusion::philox_key(options.seed);
        const std::size_t n = x.b.size();
        std::vector<double> ds;
        FitOptions inner = options;
        inner.bootstrap_samples = 0;
        for (int t = 0; t < options.bootstrap_samples; ++t) {
            Samples y;
            y.weighted = x.weighted;
            std::vector<double> gy;
            for (std::size_t i = 0; i < n; i += 4) {
                const auto u = diffusion::philox4x32(
                    diffusion::make_counter(static_cast<std::uint32_t>(i / 4), static_cast<std::uint32_t>(t), 0,
                                            diffusion::DrawPurpose::Bootstrap),
                    key);
                for (std::size_t k = 0; k < 4 && i + k < n; ++k) {
                    const std::size_t pick =
                        std::min(n - 1, static_cast<std::size_t>(diffusion::to_unit_open(u[k]) * n));
                    y.b.push_back(x.b[pick]);
                    y.s.push_back(x.s[pick]);
                    y.w.push_back(x.w[pick]);
                    gy.push_back(g[pick]);
                }
            }
            try {
                check_samples(y, gy);
                ds.push_back(fit_core(y, inner).d);
            } catch (const std::exception&) {
                // resample without enough distinct gradients, or a failed refit
            }
        }
        if (ds.size() > 1) {
            double mean = 0.0;
            for (double d : ds) {
                mean += d;
            }
            mean /= static_cast<double>(ds.size());
            double var = 0.0;
            for (double d : ds) {
                var += (d - mean) * (d - mean);
            }
            r.d_sigma_bootstrap = std::sqrt(var / static_cast<double>(ds.size() - 1));
        }
    }
    r.d_sigma = std::max(r.d_sigma_covariance, r.d_sigma_bootstrap);
    return r;
}

AttenuationCurve add_multiplicative_noise(const AttenuationCurve& curve, double relative, std::uint64_t seed,
                                          std::uint32_t trial) {
    AttenuationCurve out = curve;
    const auto key = diffusion::philox_key(seed);
    for (std::size_t i = 0; i < out.points.size(); i += 4) {
        const auto n = diffusion::normals4(
            key, diffusion::make_counter(static_cast<std::uint32_t>(i / 4), trial, 0, diffusion::DrawPurpose::Noise));
        for (std::size_t k = 0; k < 4 && i + k < out.points.size(); ++k) {
            out.points[i + k].s *= 1.0 + relative * n[k];
            out.points[i + k].sigma.reset();
        }
    }
    return out;
}

CoverageStudy noise_coverage(const AttenuationCurve& truth, double d_true, double relative_noise, int trials,
                             std::uint64_t seed, const FitOptions& options) {
    CoverageStudy study;
    study.trials = trials;
    double rel = 0.0;
    double dsum = 0.0;
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
        const AttenuationCurve noisy = add_multiplicative_noise(truth, relative_noise, seed, static_cast<std::uint32_t>(t));
        FitOptions o = options;
        o.seed = seed + static_cast<std::uint64_t>(t) + 1;
        try {
            const FitResult r = fit_diffusion(noisy, o);
            if (std::abs(r.d_fit - d_true) <= 3.0 * r.d_sigma) {
                ++study.covered;
            }
            if (r.d_fit > 0.0) {
                rel += r.d_sigma / r.d_fit;
            }
            dsum += r.d_fit;
            ++ok;
        } catch (const std::exception&) {
            ++study.failed;
        }
    }
    study.coverage = trials > 0 ? static_cast<double>(study.covered) / trials : 0.0;
    study.mean_relative_sigma = ok > 0 ? rel / ok : 0.0;
    study.mean_d_fit = ok > 0 ? dsum / ok : 0.0;
    return study;
}

}  // namespace noondiff::estimator
