#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "noondiff/curve.hpp"
#include "noondiff/diffusion/echo.hpp"
#include "noondiff/diffusion/model.hpp"
#include "noondiff/diffusion/rng.hpp"
#include "noondiff/diffusion/stejskal_tanner.hpp"
#include "noondiff/diffusion/walkers.hpp"

using namespace noondiff;
using namespace noondiff::diffusion;

namespace {

constexpr double kGammaH = 2.6752e8;

double simpson(const auto& f, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    }
    return acc * h / 3.0;
}

}  // namespace

// Published Random123 known-answer vectors.
TEST(Philox, KnownAnswers) {
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
    EXPECT_EQ(philox_key(0x0123456789abcdefull), (PhiloxKey{0x89abcdef, 0x01234567}));
}

TEST(Philox, NormalMoments) {
    const PhiloxKey key = philox_key(42);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0, cross = 0.0;
    for (int i = 0; i < n / 4; ++i) {
        const auto z = normals4(key, make_counter(static_cast<std::uint32_t>(i), 0, 0, DrawPurpose::Noise));
        for (double v : z) {
            s1 += v;
            s2 += v * v;
            s4 += v * v * v * v;
        }
        cross += z[0] * z[1] + z[2] * z[3];
    }
    EXPECT_NEAR(s1 / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(s4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
    EXPECT_NEAR(cross / (n / 2), 0.0, 5.0 / std::sqrt(n / 2));
}

TEST(Philox, UnitOpenInterval) {
    EXPECT_GT(to_unit_open(0), 0.0);
    EXPECT_LT(to_unit_open(0xffffffffu), 1.0);
}

// Fine Euler discretisation of the same Brownian step as an independent reference.
TEST(Bridge, MomentsMatchFineDiscretisation) {
    const double d = 2e-9;
    const double h = 1e-3;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    const int n = 100000;
    double vz = 0.0, vi = 0.0, cov = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto s = bridge_step(d, h, normal(rng), normal(rng));
        vz += s.dz * s.dz;
        vi += s.integral * s.integral;
        cov += s.dz * s.integral;
    }
    vz /= n;
    vi /= n;
    cov /= n;

    const int fine = 200;
    const int paths = 20000;
    double rz = 0.0, ri = 0.0, rc = 0.0;
    for (int p = 0; p < paths; ++p) {
        double z = 0.0, integral = 0.0;
        const double dt = h / fine;
        for (int k = 0; k < fine; ++k) {
            const double step = std::sqrt(2.0 * d * dt) * normal(rng);
            integral += (z + 0.5 * step) * dt;
            z += step;
        }
        rz += z * z;
        ri += integral * integral;
        rc += z * integral;
    }
    rz /= paths;
    ri /= paths;
    rc /= paths;

    EXPECT_NEAR(vz / (2 * d * h), 1.0, 0.02);
    EXPECT_NEAR(vi / (2 * d * h * h * h / 3), 1.0, 0.02);
    EXPECT_NEAR(cov / (d * h * h), 1.0, 0.02);
    EXPECT_NEAR(rz / vz, 1.0, 0.06);
    EXPECT_NEAR(ri / vi, 1.0, 0.06);
    EXPECT_NEAR(rc / cov, 1.0, 0.06);
}

TEST(Walkers, FreeMotionVariance) {
    DiffusionParams p;
    p.d_const = 1e-9;
    p.n_walkers = 50000;
    p.dt = 1e-3;
    p.seed = 5;
    const auto e = brownian_evolve(make_ensemble(p, 0), 0.02, p);
    double v = 0.0;
    for (double z : e.z) {
        v += z * z;
    }
    v /= static_cast<double>(e.size());
    EXPECT_NEAR(v / (2 * p.d_const * 0.02), 1.0, 5.0 * std::sqrt(2.0 / p.n_walkers));
    EXPECT_NEAR(e.time, 0.02, 1e-15);
}

TEST(Walkers, ParameterValidation) {
    DiffusionParams p;
    p.d_const = -1.0;
    EXPECT_THROW(p.validate(), std::domain_error);
    p.d_const = 1e-9;
    p.n_walkers = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.n_walkers = 10;
    p.dt = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.dt = 1e-3;
    p.sub_steps_per_gradient = 2;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Walkers, PairwiseSumMatchesLongDouble) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(100003);
    long double ref = 0.0L;
    for (auto& x : v) {
        x = u(rng) * 1e3;
        ref += x;
    }
    EXPECT_NEAR(pairwise_sum(v.data(), v.size()), static_cast<double>(ref), 1e-8);
    EXPECT_EQ(pairwise_sum(v.data(), 0), 0.0);
}

TEST(StejskalTanner, ClosedForm) {
    const double g = 0.2, delta = 2e-3, big = 50e-3, d = 6.24e-10;
    const double b = kGammaH * kGammaH * g * g * delta * delta * (big - delta / 3);
    EXPECT_NEAR(b_value(kGammaH, g, delta, big) / b, 1.0, 1e-14);
    EXPECT_NEAR(stejskal_tanner(g, delta, big, d, kGammaH), std::exp(-b * d), 1e-14);
    EXPECT_NEAR(gradient_for_b(b, kGammaH, delta, big), g, 1e-14);
    EXPECT_EQ(stejskal_tanner(0.0, delta, big, d, kGammaH), 1.0);
}

TEST(StejskalTanner, DomainErrors) {
    EXPECT_THROW(stejskal_tanner(0.1, 3e-3, 2e-3, 1e-9, kGammaH), std::domain_error);
    EXPECT_THROW(stejskal_tanner(0.1, -1e-3, 2e-3, 1e-9, kGammaH), std::domain_error);
    DiffusionTiming t;
    t.little_delta = 0.0;
    EXPECT_THROW(t.validate(), std::domain_error);
    t = {};
    t.shape_factor = 1.5;
    EXPECT_THROW(t.validate(), std::domain_error);
    t = {};
    t.g1 = -0.1;
    EXPECT_THROW(t.validate(), std::domain_error);
}

TEST(EchoMc, MatchesClosedFormWithinStatisticalError) {
    DiffusionTiming t;
    t.big_delta = 50e-3;
    t.little_delta = 2e-3;
    DiffusionParams p;
    p.d_const = 6.24e-10;
    p.n_walkers = 20000;
    p.dt = 1e-3;
    p.seed = 11;
    for (double b : {0.3e9, 1.0e9, 2.0e9}) {
        t.g1 = gradient_for_b(b, kGammaH, t.little_delta, t.big_delta);
        const auto e = echo_attenuation_mc(t, kGammaH, p, 0, 100);
        const double expected = std::exp(-b * p.d_const);
        EXPECT_GT(e.std_error, 0.0);
        EXPECT_NEAR(e.value, expected, 4.0 * e.std_error) << "b = " << b;
    }
}

TEST(EchoMc, TrivialLimits) {
    DiffusionTiming t;
    t.g1 = 0.0;
    DiffusionParams p;
    p.d_const = 1e-9;
    p.n_walkers = 100;
    EXPECT_EQ(echo_attenuation_mc(t, kGammaH, p).value, 1.0);
    t.g1 = 0.3;
    p.d_const = 0.0;
    EXPECT_EQ(echo_attenuation_mc(t, kGammaH, p).value, 1.0);
}

TEST(EchoMc, DeterministicForSeed) {
    DiffusionTiming t;
    t.g1 = 0.2;
    DiffusionParams p;
    p.d_const = 1e-9;
    p.n_walkers = 5000;
    p.seed = 77;
    const auto a = echo_attenuation_mc(t, kGammaH, p, 3, 20);
    const auto b = echo_attenuation_mc(t, kGammaH, p, 3, 20);
    const auto c = echo_attenuation_mc(t, kGammaH, p, 4, 20);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_NE(a.value, c.value);
}

TEST(Curve, SweepAndValidation) {
    const auto g = gradient_sweep(0.3, 4);
    ASSERT_EQ(g.size(), 4u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_NEAR(g.back(), 0.3, 1e-15);
    EXPECT_THROW(gradient_sweep(0.3, 1), std::invalid_argument);
    AttenuationCurve c;
    c.points = {{0.0, 1.0, {}}, {0.0, 0.9, {}}};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.points = {{-0.1, 1.0, {}}};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.points = {{0.0, NAN, {}}};
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(DiffusionModel, GaussianMatchesNumericIntegral) {
    const double d = 7e-10, f0 = 3e4, rate = -2e6, duration = 0.02;
    const double integral = simpson([&](double t) { return (f0 + rate * t) * (f0 + rate * t); }, 0.0, duration);
    const GaussianDiffusion g(d);
    const auto v = g.interval_factor(0, f0, rate, duration);
    EXPECT_NEAR(v.real(), std::exp(-d * integral), 1e-12);
    EXPECT_EQ(v.imag(), 0.0);
    EXPECT_THROW(GaussianDiffusion(-1.0), std::domain_error);
}

TEST(DiffusionModel, WalkersMatchGaussianAndAreReproducible) {
    DiffusionParams p;
    p.d_const = 7e-10;
    p.n_walkers = 40000;
    p.seed = 9;
    const WalkerDiffusion w(p, 0, 10);
    const WalkerDiffusion w2(p, 0, 10);
    const GaussianDiffusion g(p.d_const);
    const double f0 = 2e4, rate = -1e6, duration = 0.02;
    const auto exact = g.interval_factor(0, f0, rate, duration);
    const auto mc = w.interval_factor(0, f0, rate, duration);
    // Batch spread as the error estimate.
    double mean = 0.0, var = 0.0;
    std::vector<double> batch;
    for (int b = 0; b < w.batches(); ++b) {
        batch.push_back(w.interval_factor(0, f0, rate, duration, b).real());
        mean += batch.back();
    }
    mean /= w.batches();
    for (double v : batch) {
        var += (v - mean) * (v - mean);
    }
    const double se = std::sqrt(var / (w.batches() - 1) / w.batches());
    EXPECT_NEAR(mc.real(), exact.real(), 4.0 * se);
    EXPECT_NEAR(mean, mc.real(), 1e-12);
    EXPECT_EQ(mc, w2.interval_factor(0, f0, rate, duration));
    EXPECT_THROW(w.interval_factor(0, f0, rate, duration, 10), std::invalid_argument);
    EXPECT_THROW(w.interval_factor(WalkerDiffusion::kMaxIntervals, f0, rate, duration), std::invalid_argument);
}
