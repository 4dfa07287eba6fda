#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noondiff/app/commands.hpp"
#include "noondiff/app/csv.hpp"
#include "noondiff/app/descriptor.hpp"
#include "noondiff/estimator/stokes.hpp"

using namespace noondiff;
using app::Json;

namespace {

struct Common {
    std::string nuclides = app::default_nuclide_path();
    std::optional<std::string> mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> timestamp;
};

void add_run_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--mode", c.mode, "analytic or mc (overrides the descriptor)")
        ->check(CLI::IsMember({"analytic", "mc"}));
    cmd->add_option("--seed", c.seed, "random seed (overrides the descriptor)");
    cmd->add_option("--timestamp", c.timestamp, "provenance timestamp (default: SOURCE_DATE_EPOCH or none)");
}

std::optional<app::RunMode> mode_of(const Common& c) {
    if (!c.mode) {
        return std::nullopt;
    }
    return app::run_mode_from_string(*c.mode);
}

app::Provenance provenance_of(const Common& c) {
    app::Provenance p;
    p.version = app::tool_version();
    p.timestamp = app::resolve_timestamp(c.timestamp);
    return p;
}

void emit(const Json& j, const std::optional<std::string>& out_dir, const std::string& name) {
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::ofstream out(std::filesystem::path(*out_dir) / name, std::ios::binary);
        out << j.dump(2) << '\n';
    }
    std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Diffusion measurement with NOON states: simulation, fitting and comparison"};
    cli.require_subcommand(1);
    cli.set_version_flag("--version", app::tool_version());
    Common common;
    cli.add_option("--nuclides", common.nuclides, "nuclide constants JSON")->check(CLI::ExistingFile);

    // simulate
    auto* sim = cli.add_subcommand("simulate", "run the gradient sweep of a descriptor and fit it");
    std::string sim_descriptor;
    std::string sim_output;
    sim->add_option("--descriptor", sim_descriptor, "experiment descriptor or run report")->required();
    sim->add_option("--output", sim_output, "output directory")->required();
    add_run_flags(sim, common);

    // fit
    auto* fit = cli.add_subcommand("fit", "fit S = S0 exp(-b D) to a curve CSV");
    std::string fit_csv;
    std::optional<std::string> fit_descriptor;
    std::optional<double> fit_small_delta;
    std::optional<double> fit_big_delta;
    std::optional<double> fit_q;
    std::optional<std::string> fit_method;
    std::optional<int> fit_bootstrap;
    std::optional<std::string> fit_output;
    fit->add_option("--csv", fit_csv, "curve CSV (g_T_per_m,s_norm,s_stderr)")->required();
    fit->add_option("--descriptor", fit_descriptor, "descriptor supplying timing, gradient order and fit options");
    fit->add_option("--little-delta-s", fit_small_delta, "effective gradient duration, s");
    fit->add_option("--big-delta-s", fit_big_delta, "gradient separation, s");
    fit->add_option("--q-gamma", fit_q, "gradient order (gyromagnetic ratio), rad/s/T");
    fit->add_option("--method", fit_method, "NonlinearLS or LogLinear")
        ->check(CLI::IsMember({"NonlinearLS", "LogLinear"}));
    fit->add_option("--bootstrap", fit_bootstrap, "bootstrap resamples")->check(CLI::NonNegativeNumber);
    fit->add_option("--output", fit_output, "directory for fit.json");
    fit->add_option("--seed", common.seed, "bootstrap seed (overrides the descriptor)");

    // compare
    auto* cmp = cli.add_subcommand("compare", "run and fit two descriptors sharing D");
    std::vector<std::string> cmp_descriptors;
    std::string cmp_output;
    cmp->add_option("--descriptor", cmp_descriptors, "two descriptors (give the flag twice)")
        ->required()
        ->expected(2);
    cmp->add_option("--output", cmp_output, "output directory")->required();
    add_run_flags(cmp, common);

    // spectrum
    auto* spec = cli.add_subcommand("spectrum", "stick spectrum of the descriptor's spin system");
    std::string spec_descriptor;
    std::string spec_stage = "Thermal";
    std::string spec_channel = "control";
    std::optional<std::string> spec_output;
    spec->add_option("--descriptor", spec_descriptor, "experiment descriptor")->required();
    spec->add_option("--stage", spec_stage, "Thermal or AfterNoonDecode")
        ->check(CLI::IsMember({"Thermal", "AfterNoonDecode", "thermal", "after_noon_decode"}));
    spec->add_option("--channel", spec_channel, "control or target")->check(CLI::IsMember({"control", "target"}));
    spec->add_option("--output", spec_output, "directory for spectrum.csv (default: stdout)");

    // stokes
    auto* stokes = cli.add_subcommand("stokes", "Stokes-Einstein diffusion constant D = kT / (6 pi eta r)");
    estimator::StokesEinsteinInput se;
    stokes->add_option("--temperature-K", se.temperature, "temperature, K")->required();
    stokes->add_option("--viscosity-Pa-s", se.viscosity, "dynamic viscosity, Pa s")->required();
    stokes->add_option("--radius-m", se.stokes_radius, "hydrodynamic radius, m")->required();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? app::kExitOk : app::kExitInput;
    }

    try {
        if (*stokes) {
            Json j;
            const double d = estimator::stokes_einstein(se);
            j["temperature_K"] = se.temperature;
            j["viscosity_Pa_s"] = se.viscosity;
            j["radius_m"] = se.stokes_radius;
            j["d_m2_per_s"] = d;
            j["d_display"] = app::display_d(d);
            std::cout << j.dump(2) << '\n';
            return app::kExitOk;
        }

        const auto nuclides = app::load_nuclide_table(common.nuclides);

        if (*sim) {
            auto d = app::resolve(app::load_descriptor(sim_descriptor, nuclides), mode_of(common), common.seed);
            const auto report = app::run_experiment(d, provenance_of(common));
            app::write_run(report, sim_output);
            if (report.fit) {
                std::cout << "D = " << app::format_double(report.fit->d_fit) << " +- "
                          << app::format_double(report.fit->d_sigma) << " m^2/s  "
                          << app::display_d(report.fit->d_fit, report.fit->d_sigma) << '\n';
            }
            if (!report.fit_error.empty()) {
                std::cerr << "warning: " << report.fit_error << '\n';
            }
            return app::kExitOk;
        }

        if (*fit) {
            std::ifstream in(fit_csv);
            if (!in) {
                throw app::InputError(fit_csv + ": cannot open");
            }
            const auto points = app::read_curve_csv(in, fit_csv);
            double small_delta = 0.0;
            double big_delta = 0.0;
            double q = 0.0;
            estimator::FitOptions options;
            std::optional<std::uint64_t> seed = common.seed;
            if (fit_descriptor) {
                const auto d = app::load_descriptor(*fit_descriptor, nuclides);
                small_delta = d.timing.effective_delta();
                big_delta = d.timing.big_delta;
                q = d.q_gamma();
                options = d.fit;
                if (!seed) {
                    seed = d.seed;
                }
            }
            if (fit_small_delta) {
                small_delta = *fit_small_delta;
            }
            if (fit_big_delta) {
                big_delta = *fit_big_delta;
            }
            if (fit_q) {
                q = *fit_q;
            }
            if (fit_method) {
                options.method = estimator::fit_method_from_string(*fit_method);
            }
            if (fit_bootstrap) {
                options.bootstrap_samples = *fit_bootstrap;
            }
            if (!(small_delta > 0.0) || !(big_delta > 0.0) || q == 0.0) {
                throw app::InputError(
                    "timing: give --descriptor or all of --little-delta-s, --big-delta-s and --q-gamma");
            }
            if (options.bootstrap_samples > 0 && !seed) {
                throw app::InputError("seed: required for bootstrap resampling");
            }
            options.seed = seed.value_or(0);
            const auto r = app::fit_curve(points, small_delta, big_delta, q, options);
            emit(app::fit_to_json(r), fit_output, "fit.json");
            return app::kExitOk;
        }

        if (*cmp) {
            const auto a = app::resolve(app::load_descriptor(cmp_descriptors.at(0), nuclides), mode_of(common),
                                        common.seed);
            const auto b = app::resolve(app::load_descriptor(cmp_descriptors.at(1), nuclides), mode_of(common),
                                        common.seed);
            const auto c = app::run_comparison(a, b, provenance_of(common));
            app::write_comparison(c, cmp_output);
            std::cout << c.summary.dump(2) << '\n';
            return app::kExitOk;
        }

        if (*spec) {
            const auto d = app::load_descriptor(spec_descriptor, nuclides);
            const auto role = spec_channel == "target" ? spin::SpinRole::Target : spin::SpinRole::Control;
            const auto lines = app::simulate_spectrum(d, app::spectrum_stage_from_string(spec_stage), role);
            if (spec_output) {
                std::filesystem::create_directories(*spec_output);
                std::ofstream out(std::filesystem::path(*spec_output) / "spectrum.csv", std::ios::binary);
                app::write_spectrum_csv(out, lines);
            } else {
                app::write_spectrum_csv(std::cout, lines);
            }
            return app::kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return app::exit_code_for(e);
    }
    return app::kExitFailure;
}
