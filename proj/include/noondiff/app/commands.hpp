#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noondiff/app/descriptor.hpp"
#include "noondiff/curve.hpp"
#include "noondiff/estimator/fit.hpp"
#include "noondiff/spin/spectrum.hpp"

namespace noondiff::app {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitPhysics = 3;

// Fitted curve without measurable decay.
class DegenerateCurveError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// 2 for input errors (schema, CSV, flags), 3 for physics guards, 1 otherwise.
int exit_code_for(const std::exception& e);

struct Provenance {
    std::string version;
    std::uint64_t seed = 0;
    // ISO 8601 UTC. Taken from SOURCE_DATE_EPOCH or an explicit flag; left
    // unset otherwise so that repeated runs stay byte-identical.
    std::optional<std::string> timestamp;
};

std::string tool_version();

// Timestamp from an explicit value, else SOURCE_DATE_EPOCH, else none.
std::optional<std::string> resolve_timestamp(const std::optional<std::string>& explicit_value);

// Descriptor with mode and seed overrides applied. Throws InputError when no
// seed is available.
ExperimentDescriptor resolve(ExperimentDescriptor d, std::optional<RunMode> mode, std::optional<std::uint64_t> seed);

// Normalised signal at one gradient. MC runs use walker substream `index`
// and fill sigma with the batch standard error.
CurvePoint simulate_point(const ExperimentDescriptor& d, double g, std::uint32_t index);

// The descriptor's G sweep; d must carry a seed.
AttenuationCurve simulate_curve(const ExperimentDescriptor& d);

// Fit options of the descriptor with its seed.
estimator::FitOptions fit_options(const ExperimentDescriptor& d);

// "(6.24 +- 0.06) x 10^-10 m^2/s"
std::string display_d(double d, double sigma);
// "2.20 x 10^-10 m^2/s"
std::string display_d(double d);

Json fit_to_json(const estimator::FitResult& fit);
Json curve_to_json(const AttenuationCurve& curve);

struct RunReport {
    ExperimentDescriptor descriptor;
    AttenuationCurve curve;
    std::optional<estimator::FitResult> fit;
    std::string fit_error;
    Provenance provenance;
};

Json report_to_json(const RunReport& report);

// Simulates and fits; a failed fit is recorded in fit_error.
RunReport run_experiment(const ExperimentDescriptor& d, const Provenance& provenance);

// Writes curve.csv, report.json and plot.dat into out_dir.
void write_run(const RunReport& report, const std::string& out_dir);

// Fits a curve read from CSV. Throws DegenerateCurveError for a curve
// without measurable decay.
estimator::FitResult fit_curve(const std::vector<CurvePoint>& points, double little_delta, double big_delta,
                               double q_gamma, const estimator::FitOptions& options);

struct LScalingCheck {
    double l = 0.0;
    std::vector<double> g;        // NOON gradient axis
    std::vector<double> s_noon;   // NOON at g
    std::vector<double> s_single; // single quantum at l * g
    double max_abs_diff = 0.0;
};

// Analytic NOON curve at G against the single-quantum curve of the same
// system and timing at l G, l = gamma_eff / gamma_observed.
LScalingCheck l_scaling_check(const ExperimentDescriptor& single, const ExperimentDescriptor& noon);

struct Comparison {
    RunReport first;
    RunReport second;
    Json summary;
};

// Runs both descriptors (which must share the true D) and summarises fit
// agreement, the l-scaling identity (when one is SingleQuantum and the other
// Noon) and equivalent encoding parameters.
Comparison run_comparison(const ExperimentDescriptor& a, const ExperimentDescriptor& b, const Provenance& provenance);

void write_comparison(const Comparison& c, const std::string& out_dir);

enum class SpectrumStage { Thermal, AfterNoonDecode };

SpectrumStage spectrum_stage_from_string(const std::string& name);

// Thermal: thermal equilibrium read out by a pi/2 pulse on the observed
// channel. AfterNoonDecode: the NOON sequence with G1 off, up to (not
// including) acquisition, with the descriptor's selection gradients.
std::vector<spin::StickLine> simulate_spectrum(const ExperimentDescriptor& d, SpectrumStage stage,
                                               spin::SpinRole channel);

}  // namespace noondiff::app
