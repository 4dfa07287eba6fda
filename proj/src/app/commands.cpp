#include "noondiff/app/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "noondiff/app/csv.hpp"
#include "noondiff/diffusion/model.hpp"
#include "noondiff/estimator/goodness.hpp"
#include "noondiff/estimator/scaling.hpp"
#include "noondiff/sequence/builders.hpp"
#include "noondiff/sequence/executor.hpp"
#include "noondiff/spin/gates.hpp"

namespace noondiff::app {
namespace {

// Thermal deviations scale with gamma; only ratios matter downstream.
constexpr double kPolarization = 1e-5;

spin::StateOperator initial_state(const ExperimentDescriptor& d) {
    const auto& s = d.system;
    const double eps_target = kPolarization;
    const double eps_control = kPolarization * s.control.gamma / s.target.gamma;
    if (d.sequence == SequenceKind::Noon) {
        return spin::thermal_state(s, spin::inept_polarization(s, eps_control), eps_target);
    }
    return spin::thermal_state(s, eps_control, eps_target);
}

sequence::PulseSequence build_sequence(const ExperimentDescriptor& d, double g) {
    diffusion::DiffusionTiming t = d.timing;
    t.g1 = g;
    if (d.sequence == SequenceKind::Noon) {
        return sequence::build_noon_diffusion(d.system, t);
    }
    sequence::HahnOptions opt;
    opt.channel = d.observe;
    return sequence::build_hahn_echo(d.system, t, opt);
}

diffusion::DiffusionParams walker_params(const ExperimentDescriptor& d) {
    diffusion::DiffusionParams p = d.diffusion;
    p.seed = d.seed.value();
    return p;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

void write_json(const Json& j, const std::string& dir, const std::string& name) {
    auto out = open_out(dir, name);
    out << j.dump(2) << '\n';
}

void write_curve_files(const AttenuationCurve& curve, const std::string& dir, const std::string& suffix) {
    {
        auto out = open_out(dir, "curve" + suffix + ".csv");
        write_curve_csv(out, curve);
    }
    std::vector<double> g, s;
    for (const auto& p : curve.points) {
        g.push_back(p.g);
        s.push_back(p.s);
    }
    auto out = open_out(dir, "plot" + suffix + ".dat");
    write_plot_data(out, g, s);
}

Json provenance_json(const Provenance& p) {
    Json j;
    j["tool"] = "noondiff";
    j["version"] = p.version;
    j["seed"] = p.seed;
    j["timestamp"] = p.timestamp ? Json(*p.timestamp) : Json(nullptr);
    return j;
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const nlohmann::json::exception*>(&e)) {
        return kExitInput;
    }
    if (dynamic_cast<const std::domain_error*>(&e)) {
        return kExitPhysics;
    }
    return kExitFailure;
}

std::string tool_version() { return NOONDIFF_VERSION; }

std::optional<std::string> resolve_timestamp(const std::optional<std::string>& explicit_value) {
    if (explicit_value) {
        return explicit_value;
    }
    const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
    if (!epoch || !*epoch) {
        return std::nullopt;
    }
    char* end = nullptr;
    const long long secs = std::strtoll(epoch, &end, 10);
    if (*end != '\0' || secs < 0) {
        throw InputError("SOURCE_DATE_EPOCH: expected a non-negative integer");
    }
    const std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

ExperimentDescriptor resolve(ExperimentDescriptor d, std::optional<RunMode> mode, std::optional<std::uint64_t> seed) {
    if (mode) {
        d.mode = *mode;
    }
    if (seed) {
        d.seed = seed;
    }
    if (!d.seed) {
        throw InputError("seed: required (descriptor field or --seed)");
    }
    return d;
}

CurvePoint simulate_point(const ExperimentDescriptor& d, double g, std::uint32_t index) {
    const auto seq = build_sequence(d, g);
    const auto rho0 = initial_state(d);
    CurvePoint p;
    p.g = g;
    if (d.mode == RunMode::Analytic) {
        const diffusion::GaussianDiffusion model(d.diffusion.d_const);
        p.s = sequence::execute(seq, rho0, model).ratio.real();
    } else {
        const diffusion::WalkerDiffusion model(walker_params(d), index, d.batches);
        const auto r = sequence::execute(seq, rho0, model);
        p.s = r.ratio.real();
        p.sigma = r.std_error;
    }
    if (d.t2) {
        const double f = std::exp(-seq.total_duration() / *d.t2);
        p.s *= f;
        if (p.sigma) {
            *p.sigma *= f;
        }
    }
    return p;
}

AttenuationCurve simulate_curve(const ExperimentDescriptor& d) {
    if (!d.seed) {
        throw InputError("seed: required (descriptor field or --seed)");
    }
    d.timing.validate();
    AttenuationCurve curve;
    curve.little_delta = d.timing.effective_delta();
    curve.big_delta = d.timing.big_delta;
    curve.q_gamma = d.q_gamma();
    const auto g_list = gradient_sweep(d.sweep.g_max, d.sweep.n_points);
    for (std::size_t i = 0; i < g_list.size(); ++i) {
        curve.points.push_back(simulate_point(d, g_list[i], static_cast<std::uint32_t>(i)));
    }
    return curve;
}

estimator::FitOptions fit_options(const ExperimentDescriptor& d) {
    estimator::FitOptions o = d.fit;
    o.seed = d.seed.value_or(0);
    return o;
}

std::string display_d(double d, double sigma) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.2f +- %.2f) x 10^-10 m^2/s", d * 1e10, sigma * 1e10);
    return buf;
}

std::string display_d(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f x 10^-10 m^2/s", d * 1e10);
    return buf;
}

Json fit_to_json(const estimator::FitResult& fit) {
    Json j;
    j["method"] = estimator::to_string(fit.method);
    j["d_m2_per_s"] = fit.d_fit;
    j["d_sigma_m2_per_s"] = fit.d_sigma;
    j["d_display"] = display_d(fit.d_fit, fit.d_sigma);
    j["s0"] = fit.s0_fit;
    j["residual_rms"] = fit.residual_rms;
    j["d_sigma_covariance_m2_per_s"] = fit.d_sigma_covariance;
    j["d_sigma_bootstrap_m2_per_s"] = fit.d_sigma_bootstrap;
    j["bootstrap_samples"] = fit.bootstrap_samples;
    j["iterations"] = fit.iterations;
    j["degenerate"] = fit.degenerate;
    return j;
}

Json curve_to_json(const AttenuationCurve& curve) {
    Json pts = Json::array();
    for (const auto& p : curve.points) {
        Json x;
        x["g_T_per_m"] = p.g;
        x["s_norm"] = p.s;
        x["s_stderr"] = p.sigma ? Json(*p.sigma) : Json(nullptr);
        pts.push_back(x);
    }
    Json j;
    j["little_delta_s"] = curve.little_delta;
    j["big_delta_s"] = curve.big_delta;
    j["q_gamma_rad_per_s_per_T"] = curve.q_gamma;
    j["points"] = pts;
    return j;
}

Json report_to_json(const RunReport& r) {
    Json j;
    j["descriptor"] = to_json(r.descriptor);
    j["curve"] = curve_to_json(r.curve);
    j["fit"] = r.fit ? fit_to_json(*r.fit) : Json(nullptr);
    if (r.fit) {
        const auto g = estimator::goodness_report(r.curve, *r.fit);
        Json gj;
        gj["r_squared_log"] = g.r_squared_log;
        gj["runs"] = g.runs;
        gj["runs_z"] = g.runs_z;
        gj["structured_residuals"] = g.runs_flag;
        j["goodness"] = gj;
    }
    j["fit_error"] = r.fit_error.empty() ? Json(nullptr) : Json(r.fit_error);
    j["provenance"] = provenance_json(r.provenance);
    return j;
}

RunReport run_experiment(const ExperimentDescriptor& d, const Provenance& provenance) {
    RunReport r;
    r.descriptor = d;
    r.provenance = provenance;
    r.provenance.seed = d.seed.value();
    r.curve = simulate_curve(d);
    try {
        r.fit = estimator::fit_diffusion(r.curve, fit_options(d));
        if (r.fit->degenerate) {
            r.fit_error = "degenerate curve: no measurable decay";
        }
    } catch (const estimator::FitError& e) {
        r.fit_error = e.what();
    }
    return r;
}

void write_run(const RunReport& report, const std::string& out_dir) {
    write_curve_files(report.curve, out_dir, "");
    write_json(report_to_json(report), out_dir, "report.json");
}

estimator::FitResult fit_curve(const std::vector<CurvePoint>& points, double little_delta, double big_delta,
                               double q_gamma, const estimator::FitOptions& options) {
    if (points.size() < 3) {
        throw InputError("csv: at least 3 data rows required, got " + std::to_string(points.size()));
    }
    AttenuationCurve curve;
    curve.points = points;
    curve.little_delta = little_delta;
    curve.big_delta = big_delta;
    curve.q_gamma = q_gamma;
    const auto fit = estimator::fit_diffusion(curve, options);
    if (fit.degenerate) {
        throw DegenerateCurveError("degenerate curve: the signal shows no measurable decay, D cannot be determined");
    }
    return fit;
}

LScalingCheck l_scaling_check(const ExperimentDescriptor& single, const ExperimentDescriptor& noon) {
    if (single.sequence != SequenceKind::SingleQuantum || noon.sequence != SequenceKind::Noon) {
        throw InputError("l-scaling check needs one SingleQuantum and one Noon descriptor");
    }
    ExperimentDescriptor sq = single;
    sq.timing = noon.timing;
    sq.mode = RunMode::Analytic;
    sq.diffusion.d_const = noon.diffusion.d_const;
    sq.t2.reset();
    ExperimentDescriptor nn = noon;
    nn.mode = RunMode::Analytic;
    nn.t2.reset();

    LScalingCheck c;
    c.l = nn.q_gamma() / sq.q_gamma();
    c.g = gradient_sweep(nn.sweep.g_max, nn.sweep.n_points);
    for (std::size_t i = 0; i < c.g.size(); ++i) {
        c.s_noon.push_back(simulate_point(nn, c.g[i], static_cast<std::uint32_t>(i)).s);
        c.s_single.push_back(simulate_point(sq, c.l * c.g[i], static_cast<std::uint32_t>(i)).s);
        c.max_abs_diff = std::max(c.max_abs_diff, std::abs(c.s_noon.back() - c.s_single.back()));
    }
    return c;
}

Comparison run_comparison(const ExperimentDescriptor& a, const ExperimentDescriptor& b, const Provenance& provenance) {
    if (a.diffusion.d_const != b.diffusion.d_const) {
        throw InputError("diffusion.d_true_m2_per_s: compared descriptors must share the same D");
    }
    Comparison c;
    c.first = run_experiment(a, provenance);
    c.second = run_experiment(b, provenance);

    Json s;
    s["d_true_m2_per_s"] = a.diffusion.d_const;
    if (c.first.fit && c.second.fit) {
        const double d1 = c.first.fit->d_fit;
        const double d2 = c.second.fit->d_fit;
        const double combined = std::hypot(c.first.fit->d_sigma, c.second.fit->d_sigma);
        s["d_first_m2_per_s"] = d1;
        s["d_second_m2_per_s"] = d2;
        s["relative_difference"] = d1 != 0.0 ? Json(std::abs(d1 - d2) / std::abs(d1)) : Json(nullptr);
        s["combined_sigma_m2_per_s"] = combined;
        s["difference_in_sigma"] = combined > 0.0 ? Json(std::abs(d1 - d2) / combined) : Json(nullptr);
    } else {
        s["relative_difference"] = nullptr;
    }

    const ExperimentDescriptor* sq = nullptr;
    const ExperimentDescriptor* nn = nullptr;
    for (const auto* d : {&a, &b}) {
        if (d->sequence == SequenceKind::SingleQuantum && !sq) {
            sq = d;
        } else if (d->sequence == SequenceKind::Noon && !nn) {
            nn = d;
        }
    }
    if (sq && nn) {
        const auto check = l_scaling_check(*sq, *nn);
        Json l;
        l["lopsidedness"] = check.l;
        l["max_abs_diff"] = check.max_abs_diff;
        s["l_scaling"] = l;

        estimator::EncodingParameters base{sq->sweep.g_max, sq->timing.effective_delta(), sq->timing.big_delta};
        Json eq = Json::array();
        for (const auto& e : estimator::equivalent_parameters(check.l, base)) {
            Json x;
            x["name"] = e.name;
            x["g_T_per_m"] = e.params.g;
            x["little_delta_s"] = e.params.delta;
            x["big_delta_s"] = e.params.big_delta;
            x["b_ratio"] = e.b_ratio;
            x["valid"] = e.valid;
            x["big_delta_reduction"] = base.big_delta / e.params.big_delta;
            x["diffusion_time_reduction"] =
                (base.big_delta - base.delta / 3.0) / (e.params.big_delta - e.params.delta / 3.0);
            eq.push_back(x);
        }
        s["equivalent_parameters"] = eq;
    } else {
        s["l_scaling"] = nullptr;
        s["equivalent_parameters"] = nullptr;
    }
    c.summary = s;
    return c;
}

void write_comparison(const Comparison& c, const std::string& out_dir) {
    write_curve_files(c.first.curve, out_dir, "_first");
    write_curve_files(c.second.curve, out_dir, "_second");
    Json j;
    j["first"] = report_to_json(c.first);
    j["second"] = report_to_json(c.second);
    j["comparison"] = c.summary;
    write_json(j, out_dir, "compare.json");
}

SpectrumStage spectrum_stage_from_string(const std::string& name) {
    if (name == "Thermal" || name == "thermal") {
        return SpectrumStage::Thermal;
    }
    if (name == "AfterNoonDecode" || name == "after_noon_decode") {
        return SpectrumStage::AfterNoonDecode;
    }
    throw InputError("stage: expected 'Thermal' or 'AfterNoonDecode', got '" + name + "'");
}

std::vector<spin::StickLine> simulate_spectrum(const ExperimentDescriptor& d, SpectrumStage stage,
                                               spin::SpinRole channel) {
    if (channel == spin::SpinRole::Target && d.system.n_total < 2) {
        throw InputError("channel: single-spin system has no target channel");
    }
    if (stage == SpectrumStage::Thermal) {
        ExperimentDescriptor sq = d;
        sq.sequence = SequenceKind::SingleQuantum;
        const auto rho = spin::collective_rotation(initial_state(sq), sequence::channel_of(channel), spin::Axis::Y,
                                                   std::numbers::pi / 2.0);
        return spin::stick_spectrum(rho, channel);
    }
    if (d.system.n_total < 2) {
        throw InputError("system.n_total: the NOON sequence needs at least 2 spins");
    }
    ExperimentDescriptor nn = d;
    nn.sequence = SequenceKind::Noon;
    const auto seq = build_sequence(nn, 0.0);
    const diffusion::GaussianDiffusion model(d.diffusion.d_const);
    sequence::ExecuteOptions opt;
    opt.normalize = false;
    const auto r = sequence::execute(seq, initial_state(nn), model, opt);
    return spin::stick_spectrum(r.state, channel);
}

}  // namespace noondiff::app
