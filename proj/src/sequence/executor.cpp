#include "noondiff/sequence/executor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "noondiff/spin/coherence.hpp"
#include "noondiff/spin/spectrum.hpp"

namespace noondiff::sequence {
namespace {

constexpr std::size_t kMaxReachable = 200000;

struct Component {
    double f = 0.0;
    StateOperator rho;
};

struct RawRun {
    Complex signal{0.0, 0.0};
    StateOperator state;
    std::size_t components = 0;
};

// Element keys (d_control, d_targets) for every sector.
std::vector<Eigen::MatrixXi> key_maps(const StateOperator& rho, int n_targets) {
    std::vector<Eigen::MatrixXi> out;
    const int span = 2 * n_targets + 1;
    for (std::size_t s = 0; s < rho.sectors().size(); ++s) {
        const Eigen::Index dim = rho.sectors()[s].rho.rows();
        std::vector<spin::BasisLabel> labels;
        labels.reserve(static_cast<std::size_t>(dim));
        for (Eigen::Index i = 0; i < dim; ++i) {
            labels.push_back(rho.label(s, i));
        }
        Eigen::MatrixXi keys(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) {
                const auto& lr = labels[static_cast<std::size_t>(r)];
                const auto& lc = labels[static_cast<std::size_t>(c)];
                const int da = lc.control - lr.control;
                const int dk = lc.flips - lr.flips;
                keys(r, c) = (da + 1) * span + (dk + n_targets);
            }
        }
        out.push_back(std::move(keys));
    }
    return out;
}

class Runner {
public:
    Runner(const PulseSequence& seq, const diffusion::DiffusionModel& model, const ExecuteOptions& options, int batch)
        : seq_(seq), model_(model), options_(options), batch_(batch) {
        const auto& spec = seq.spec;
        n_ = spec.n_targets();
        for (int a = -1; a <= 1; ++a) {
            for (int k = -n_; k <= n_; ++k) {
                q_values_.push_back(spec.control.gamma * a + spec.target.gamma * k);
            }
        }
        double qmax = 0.0;
        for (double q : q_values_) {
            qmax = std::max(qmax, std::abs(q));
        }
        double area = 0.0;
        for (const auto& g : seq.gradients()) {
            area += std::abs(g.area());
        }
        f_scale_ = qmax * area;
        tol_ = f_scale_ > 0.0 ? 1e-9 * f_scale_ : 0.0;
        if (options.profile == SpatialProfile::Ideal && !options.stop_after) {
            build_reachable();
        }
    }

    RawRun run(const StateOperator& rho0) {
        comps_.clear();
        comps_.push_back(Component{0.0, rho0});
        norm0_ = rho0.frobenius_norm();
        const std::size_t last = options_.stop_after ? std::min(*options_.stop_after, seq_.events.size())
                                                     : seq_.events.size();
        std::size_t grad_index = 0;
        for (std::size_t i = 0; i < last; ++i) {
            const auto& ev = seq_.events[i];
            if (2 * i + 1 >= diffusion::WalkerDiffusion::kMaxIntervals) {
                throw std::invalid_argument("sequence has too many events");
            }
            const auto id = static_cast<std::uint32_t>(2 * i);
            if (const auto* p = std::get_if<Pulse>(&ev)) {
                for (auto& c : comps_) {
                    c.rho = spin::rotate(c.rho, p->channel, p->applied_phase(), p->applied_angle());
                }
            } else if (const auto* d = std::get_if<Delay>(&ev)) {
                free_interval(id, d->duration);
            } else if (const auto* g = std::get_if<Gradient>(&ev)) {
                gradient(id, *g, grad_index++);
            } else {
                break;
            }
            if (options_.filter_after && *options_.filter_after == i) {
                filter_orders();
            }
        }
        RawRun out{Complex{0.0, 0.0}, StateOperator::zero(seq_.spec), comps_.size()};
        for (const auto& c : comps_) {
            const double w = weight(c.f);
            if (w != 0.0) {
                out.state += c.rho * Complex{w, 0.0};
            }
        }
        out.signal = spin::detection_amplitude(out.state, seq_.acquire().channel);
        return out;
    }

private:
    double weight(double f) const {
        if (options_.profile == SpatialProfile::Ideal) {
            return std::abs(f) <= tol_ ? 1.0 : 0.0;
        }
        const double x = f * options_.sample_length / 2.0;
        return std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x;
    }

    void free_interval(std::uint32_t id, double duration) {
        for (auto& c : comps_) {
            c.rho = spin::j_evolution(c.rho, duration);
            if (c.f != 0.0) {
                c.rho *= model_.interval_factor(id, c.f, 0.0, duration, batch_);
            }
        }
        prune_small();
    }

    void gradient(std::uint32_t id, const Gradient& g, std::size_t grad_index) {
        const double rate_per_q = g.signed_amplitude();
        const double on = g.effective_duration();
        if (rate_per_q == 0.0 || on == 0.0) {
            free_interval(id, g.duration);
            return;
        }
        std::vector<Component> next;
        for (auto& c : comps_) {
            const StateOperator rho = spin::j_evolution(c.rho, g.duration);
            if (keys_.empty()) {
                keys_ = key_maps(rho, n_);
            }
            std::map<int, std::vector<spin::Sector>> split;
            for (std::size_t s = 0; s < rho.sectors().size(); ++s) {
                const auto& sec = rho.sectors()[s];
                const auto& keys = keys_[s];
                for (Eigen::Index r = 0; r < sec.rho.rows(); ++r) {
                    for (Eigen::Index col = 0; col < sec.rho.cols(); ++col) {
                        const Complex v = sec.rho(r, col);
                        if (v == Complex{0.0, 0.0}) {
                            continue;
                        }
                        auto it = split.find(keys(r, col));
                        if (it == split.end()) {
                            it = split.emplace(keys(r, col), StateOperator::zero(seq_.spec).sectors()).first;
                        }
                        it->second[s].rho(r, col) = v;
                    }
                }
            }
            const int span = 2 * n_ + 1;
            for (auto& [key, sectors] : split) {
                const int da = key / span - 1;
                const int dk = key % span - n_;
                const double q = seq_.spec.control.gamma * da + seq_.spec.target.gamma * dk;
                const double rate = q * rate_per_q;
                const double f_new = c.f + rate * on;
                StateOperator part(seq_.spec, std::move(sectors));
                if (c.f != 0.0 || rate != 0.0) {
                    part *= model_.interval_factor(id, c.f, rate, on, batch_);
                }
                if (g.duration > on && f_new != 0.0) {
                    part *= model_.interval_factor(id + 1, f_new, 0.0, g.duration - on, batch_);
                }
                if (!reachable(f_new, grad_index)) {
                    continue;
                }
                next.push_back(Component{f_new, std::move(part)});
            }
        }
        comps_ = merge(std::move(next));
        prune_small();
    }

    std::vector<Component> merge(std::vector<Component> comps) const {
        std::stable_sort(comps.begin(), comps.end(),
                         [](const Component& a, const Component& b) { return a.f < b.f; });
        std::vector<Component> out;
        for (auto& c : comps) {
            if (!out.empty() && std::abs(c.f - out.back().f) <= tol_) {
                out.back().rho += c.rho;
            } else {
                out.push_back(std::move(c));
            }
        }
        return out;
    }

    void prune_small() {
        const double floor = options_.prune_fraction * norm0_;
        comps_.erase(std::remove_if(comps_.begin(), comps_.end(),
                                    [floor](const Component& c) { return c.rho.frobenius_norm() <= floor; }),
                     comps_.end());
    }

    void filter_orders() {
        for (auto& c : comps_) {
            std::vector<spin::Sector> sectors = c.rho.sectors();
            for (std::size_t s = 0; s < sectors.size(); ++s) {
                const Eigen::MatrixXi orders = spin::order_map(c.rho, s);
                for (Eigen::Index r = 0; r < orders.rows(); ++r) {
                    for (Eigen::Index col = 0; col < orders.cols(); ++col) {
                        if (!options_.keep_orders.count(orders(r, col))) {
                            sectors[s].rho(r, col) = 0.0;
                        }
                    }
                }
            }
            c.rho = StateOperator(seq_.spec, std::move(sectors));
        }
    }

    // Offsets that the gradients after each gradient can still add. Used to
    // drop pathways that can no longer refocus; a level is left empty (no
    // pruning) when the set is too large to enumerate.
    void build_reachable() {
        const auto grads = seq_.gradients();
        const std::size_t m = grads.size();
        reach_.assign(m, {});
        reach_known_.assign(m, false);
        if (m == 0) {
            return;
        }
        std::vector<double> current{0.0};
        reach_[m - 1] = current;
        reach_known_[m - 1] = true;
        for (std::size_t k = m - 1; k-- > 0;) {
            const double a = grads[k + 1].area();
            std::vector<double> nxt;
            if (a == 0.0) {
                nxt = current;
            } else {
                nxt.reserve(current.size() * q_values_.size());
                for (double q : q_values_) {
                    for (double r : current) {
                        nxt.push_back(q * a + r);
                    }
                }
                std::sort(nxt.begin(), nxt.end());
                std::vector<double> uniq;
                for (double v : nxt) {
                    if (uniq.empty() || v - uniq.back() > tol_) {
                        uniq.push_back(v);
                    }
                }
                nxt = std::move(uniq);
            }
            if (nxt.size() > kMaxReachable) {
                return;
            }
            current = std::move(nxt);
            reach_[k] = current;
            reach_known_[k] = true;
        }
    }

    bool reachable(double f, std::size_t grad_index) const {
        if (grad_index >= reach_known_.size() || !reach_known_[grad_index]) {
            return true;
        }
        const auto& r = reach_[grad_index];
        // need f + r == 0 for some r
        auto it = std::lower_bound(r.begin(), r.end(), -f - tol_);
        return it != r.end() && *it <= -f + tol_;
    }

    const PulseSequence& seq_;
    const diffusion::DiffusionModel& model_;
    const ExecuteOptions& options_;
    int batch_;
    int n_ = 0;
    std::vector<double> q_values_;
    double f_scale_ = 0.0;
    double tol_ = 0.0;
    double norm0_ = 0.0;
    std::vector<Component> comps_;
    std::vector<Eigen::MatrixXi> keys_;
    std::vector<std::vector<double>> reach_;
    std::vector<bool> reach_known_;
};

void check_state(const PulseSequence& seq, const StateOperator& rho0) {
    const auto& a = seq.spec;
    const auto& b = rho0.spec();
    if (a.n_total != b.n_total || a.representation != b.representation || a.control.gamma != b.control.gamma ||
        a.target.gamma != b.target.gamma || a.j_coupling != b.j_coupling) {
        throw std::invalid_argument("initial state does not belong to the sequence's spin system");
    }
}

RawRun run_once(const PulseSequence& seq, const StateOperator& rho0, const diffusion::DiffusionModel& model,
                const ExecuteOptions& options, int batch) {
    Runner runner(seq, model, options, batch);
    return runner.run(rho0);
}

}  // namespace

PulseSequence without_encoding(const PulseSequence& seq) {
    PulseSequence out = seq;
    for (auto& ev : out.events) {
        if (auto* g = std::get_if<Gradient>(&ev); g && g->role == GradientRole::Encode) {
            g->amplitude = 0.0;
        }
    }
    return out;
}

ExecuteResult execute(const PulseSequence& seq, const StateOperator& rho0, const diffusion::DiffusionModel& model,
                      const ExecuteOptions& options) {
    seq.validate();
    check_state(seq, rho0);

    RawRun main = run_once(seq, rho0, model, options, options.batch);
    ExecuteResult result{main.signal, Complex{1.0, 0.0}, main.signal, 0.0, main.state, main.components};
    if (!options.normalize || options.stop_after) {
        return result;
    }
    const PulseSequence ref_seq = without_encoding(seq);
    const RawRun ref = run_once(ref_seq, rho0, model, options, options.batch);
    if (std::abs(ref.signal) == 0.0) {
        throw std::domain_error("reference signal vanishes; the sequence does not reach the detected coherence");
    }
    result.reference = ref.signal;
    result.ratio = main.signal / ref.signal;

    const int nb = model.batches();
    if (nb > 1 && options.batch < 0) {
        std::vector<double> ratios;
        for (int b = 0; b < nb; ++b) {
            const Complex s = run_once(seq, rho0, model, options, b).signal;
            const Complex r = run_once(ref_seq, rho0, model, options, b).signal;
            ratios.push_back(std::abs(r) > 0.0 ? (s / r).real() : 0.0);
        }
        double mean = 0.0;
        for (double r : ratios) {
            mean += r;
        }
        mean /= nb;
        double var = 0.0;
        for (double r : ratios) {
            var += (r - mean) * (r - mean);
        }
        result.std_error = std::sqrt(var / (nb - 1) / nb);
    }
    return result;
}

}  // namespace noondiff::sequence
