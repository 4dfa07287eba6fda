#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "noondiff/diffusion/walkers.hpp"

namespace noondiff::diffusion {

// Spatial averaging used by the sequence executor. A coherence component
// whose running wavenumber is f(t) = f0 + rate * t over an interval of
// length T picks up exp(-i int f dz) from the molecular displacement; the
// model returns the ensemble average of that factor. Disjoint intervals use
// independent Brownian increments, so averages of consecutive intervals
// multiply.
class DiffusionModel {
public:
    virtual ~DiffusionModel() = default;

    // interval_id identifies the time interval; calls with the same id share
    // the same molecular trajectories. batch < 0 averages over everything,
    // otherwise over one of batches() disjoint sub-ensembles.
    virtual std::complex<double> interval_factor(std::uint32_t interval_id, double f0, double rate,
                                                 double duration, int batch = -1) const = 0;
    virtual int batches() const { return 1; }
    virtual double d_const() const = 0;
};

// Closed form for free diffusion: exp(-D (f0^2 T + f0 rate T^2 + rate^2 T^3 / 3)).
class GaussianDiffusion : public DiffusionModel {
public:
    explicit GaussianDiffusion(double d_const);

    std::complex<double> interval_factor(std::uint32_t interval_id, double f0, double rate, double duration,
                                         int batch = -1) const override;
    double d_const() const override { return d_; }

private:
    double d_;
};

// Walker average. For every interval the displacement X = dz and
// Y = int t dz are sampled per walker (one exact Brownian-bridge draw) and
// cached, so repeated queries of one interval see the same trajectories.
// Query results are cached too, for all batches at once.
class WalkerDiffusion : public DiffusionModel {
public:
    // substream separates otherwise identical runs (e.g. sweep points).
    WalkerDiffusion(DiffusionParams params, std::uint32_t substream = 0, int batches = 10);

    std::complex<double> interval_factor(std::uint32_t interval_id, double f0, double rate, double duration,
                                         int batch = -1) const override;
    int batches() const override { return batches_; }
    double d_const() const override { return params_.d_const; }

    static constexpr std::uint32_t kMaxIntervals = 4096;

private:
    struct IntervalStats {
        double duration = 0.0;
        std::vector<double> x;
        std::vector<double> y;
    };

    // Per-batch sums of exp(-i phase) for one query.
    struct FactorSums {
        std::vector<std::complex<double>> batch;
        std::complex<double> total;
    };
    using QueryKey = std::tuple<std::uint32_t, double, double, double>;

    const IntervalStats& stats(std::uint32_t interval_id, double duration) const;

    DiffusionParams params_;
    std::uint32_t substream_;
    int batches_;
    mutable std::mutex mutex_;
    mutable std::map<std::uint32_t, IntervalStats> cache_;
    mutable std::mutex factor_mutex_;
    mutable std::map<QueryKey, FactorSums> factors_;
};

}  // namespace noondiff::diffusion
