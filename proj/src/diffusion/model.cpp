#include "noondiff/diffusion/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "phasor.hpp"

namespace noondiff::diffusion {

GaussianDiffusion::GaussianDiffusion(double d_const) : d_(d_const) {
    if (!(d_const >= 0.0) || !std::isfinite(d_const)) {
        throw std::domain_error("diffusion constant must be non-negative");
    }
}

std::complex<double> GaussianDiffusion::interval_factor(std::uint32_t, double f0, double rate, double duration,
                                                        int) const {
    const double t = duration;
    const double integral = f0 * f0 * t + f0 * rate * t * t + rate * rate * t * t * t / 3.0;
    return {std::exp(-d_ * integral), 0.0};
}

WalkerDiffusion::WalkerDiffusion(DiffusionParams params, std::uint32_t substream, int batches)
    : params_(params), substream_(substream), batches_(batches) {
    params_.validate();
    if (batches_ < 1 || batches_ > params_.n_walkers) {
        throw std::invalid_argument("batch count must lie between 1 and the walker count");
    }
}

const WalkerDiffusion::IntervalStats& WalkerDiffusion::stats(std::uint32_t interval_id, double duration) const {
    if (interval_id >= kMaxIntervals) {
        throw std::invalid_argument("interval id out of range");
    }
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(interval_id);
    if (it != cache_.end() && it->second.duration == duration) {
        return it->second;
    }
    IntervalStats s;
    s.duration = duration;
    const auto n = static_cast<std::size_t>(params_.n_walkers);
    s.x.assign(n, 0.0);
    s.y.assign(n, 0.0);
    if (params_.d_const > 0.0 && duration > 0.0) {
        // (X, int z dt) of free Brownian motion is jointly Gaussian; the
        // bridge step samples it exactly in one draw for any duration.
        const PhiloxKey key = philox_key(params_.seed);
        const std::uint32_t stream = substream_ * kMaxIntervals + interval_id;
#pragma omp parallel for schedule(static)
        for (std::int64_t w = 0; w < static_cast<std::int64_t>(n); w += 2) {
            const auto g = normals4(key, make_counter(static_cast<std::uint32_t>(w / 2), 0, stream,
                                                      DrawPurpose::Brownian));
            for (std::int64_t k = 0; k < 2 && w + k < static_cast<std::int64_t>(n); ++k) {
                const BridgeStep b = bridge_step(params_.d_const, duration, g[2 * k], g[2 * k + 1]);
                // int_0^T t dz = T z(T) - int_0^T z dt
                s.x[static_cast<std::size_t>(w + k)] = b.dz;
                s.y[static_cast<std::size_t>(w + k)] = duration * b.dz - b.integral;
            }
        }
    }
    auto [pos, inserted] = cache_.insert_or_assign(interval_id, std::move(s));
    return pos->second;
}

std::complex<double> WalkerDiffusion::interval_factor(std::uint32_t interval_id, double f0, double rate,
                                                      double duration, int batch) const {
    if (duration <= 0.0 || params_.d_const == 0.0 || (f0 == 0.0 && rate == 0.0)) {
        return {1.0, 0.0};
    }
    if (batch >= batches_) {
        throw std::invalid_argument("batch index out of range");
    }
    const std::size_t n = static_cast<std::size_t>(params_.n_walkers);
    const auto nb = static_cast<std::size_t>(batches_);
    auto lo_of = [&](std::size_t b) { return n * b / nb; };
    const QueryKey key{interval_id, f0, rate, duration};
    {
        std::lock_guard<std::mutex> lock(factor_mutex_);
        auto it = factors_.find(key);
        if (it != factors_.end()) {
            const FactorSums& f = it->second;
            if (batch < 0) {
                return f.total / static_cast<double>(n);
            }
            const auto b = static_cast<std::size_t>(batch);
            return f.batch[b] / static_cast<double>(lo_of(b + 1) - lo_of(b));
        }
    }

    const IntervalStats& s = stats(interval_id, duration);
    const std::unique_ptr<double[]> re(new double[n]);
    const std::unique_ptr<double[]> im(new double[n]);
    detail::phasors(s.x.data(), s.y.data(), f0, rate, re.get(), im.get(), n);
    FactorSums f;
    f.batch.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = lo_of(b);
        const std::size_t hi = lo_of(b + 1);
        f.batch[b] = {pairwise_sum(re.get() + lo, hi - lo), pairwise_sum(im.get() + lo, hi - lo)};
    }
    f.total = {pairwise_sum(re.get(), n), pairwise_sum(im.get(), n)};

    std::complex<double> out;
    if (batch < 0) {
        out = f.total / static_cast<double>(n);
    } else {
        const auto b = static_cast<std::size_t>(batch);
        out = f.batch[b] / static_cast<double>(lo_of(b + 1) - lo_of(b));
    }
    std::lock_guard<std::mutex> lock(factor_mutex_);
    factors_.emplace(key, std::move(f));
    return out;
}

}  // namespace noondiff::diffusion
