#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "noondiff/diffusion/timing.hpp"
#include "noondiff/diffusion/walkers.hpp"
#include "noondiff/estimator/fit.hpp"
#include "noondiff/spin/nuclide.hpp"

namespace noondiff::app {

using Json = nlohmann::ordered_json;

// Schema violation in a descriptor or CSV input. The message starts with the
// offending field path or line number.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class SequenceKind { SingleQuantum, Noon };
enum class RunMode { Analytic, MonteCarlo };

const char* to_string(SequenceKind kind);
const char* to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& name);

// label -> gyromagnetic ratio (rad s^-1 T^-1).
using NuclideTable = std::map<std::string, double>;

// Reads {"H1": {"gamma_rad_per_s_per_T": ...}, ...}.
NuclideTable load_nuclide_table(const std::string& path);
std::string default_nuclide_path();

struct SweepSpec {
    double g_max = 0.0;  // T/m
    int n_points = 21;
};

struct ExperimentDescriptor {
    std::string name;
    spin::SpinSystemSpec system;
    SequenceKind sequence = SequenceKind::SingleQuantum;
    // Observed nuclide of the single-quantum experiment.
    spin::SpinRole observe = spin::SpinRole::Target;
    diffusion::DiffusionTiming timing;
    SweepSpec sweep;
    diffusion::DiffusionParams diffusion;  // d_const is the true D used for synthesis
    int batches = 10;
    std::optional<double> t2;  // s, uniform relaxation factor exp(-echo time / T2)
    estimator::FitOptions fit;
    RunMode mode = RunMode::Analytic;
    std::optional<std::uint64_t> seed;

    // Gradient order the curve is fitted with: gamma of the observed nuclide
    // or gamma_eff.
    double q_gamma() const;
};

// Throws InputError with the field path on schema violations. Physics guards
// (Delta < delta and the like) are left to the builders.
ExperimentDescriptor parse_descriptor(const Json& doc, const NuclideTable& nuclides);

// Accepts either a descriptor or a run report (its "descriptor" member).
ExperimentDescriptor load_descriptor(const std::string& path, const NuclideTable& nuclides);

// Canonical JSON form; parse_descriptor(to_json(d)) == d.
Json to_json(const ExperimentDescriptor& descriptor);

}  // namespace noondiff::app
