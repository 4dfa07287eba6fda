#include "noondiff/app/descriptor.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace noondiff::app {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw InputError(path + ": " + what); }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const Json& require_object(const Json& obj, const std::string& path) {
    if (!obj.is_object()) {
        fail(path.empty() ? "<root>" : path, "expected an object");
    }
    return obj;
}

void reject_unknown(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            fail(join(path, key), "unknown field");
        }
    }
}

enum class Bound { Any, NonNegative, Positive };

std::optional<double> number(const Json& obj, const std::string& path, const std::string& key, Bound bound) {
    const std::string p = join(path, key);
    if (!obj.contains(key) || obj.at(key).is_null()) {
        return std::nullopt;
    }
    const Json& v = obj.at(key);
    if (!v.is_number()) {
        fail(p, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(p, "must be finite");
    }
    if (bound == Bound::Positive && !(x > 0.0)) {
        fail(p, "must be positive");
    }
    if (bound == Bound::NonNegative && x < 0.0) {
        fail(p, "must be non-negative");
    }
    return x;
}

double required_number(const Json& obj, const std::string& path, const std::string& key, Bound bound) {
    auto x = number(obj, path, key, bound);
    if (!x) {
        fail(join(path, key), "required field missing");
    }
    return *x;
}

std::optional<std::int64_t> integer(const Json& obj, const std::string& path, const std::string& key,
                                    std::int64_t min_value) {
    const std::string p = join(path, key);
    if (!obj.contains(key) || obj.at(key).is_null()) {
        return std::nullopt;
    }
    const Json& v = obj.at(key);
    if (!v.is_number_integer()) {
        fail(p, "expected an integer");
    }
    const auto x = v.get<std::int64_t>();
    if (x < min_value) {
        fail(p, "must be at least " + std::to_string(min_value));
    }
    return x;
}

std::string text(const Json& obj, const std::string& path, const std::string& key) {
    const std::string p = join(path, key);
    if (!obj.contains(key)) {
        fail(p, "required field missing");
    }
    if (!obj.at(key).is_string()) {
        fail(p, "expected a string");
    }
    return obj.at(key).get<std::string>();
}

spin::Nuclide parse_nuclide(const Json& obj, const std::string& path, const NuclideTable& nuclides) {
    require_object(obj, path);
    reject_unknown(obj, path, {"label", "gamma_rad_per_s_per_T"});
    spin::Nuclide n;
    n.label = text(obj, path, "label");
    if (auto g = number(obj, path, "gamma_rad_per_s_per_T", Bound::Any)) {
        if (*g == 0.0) {
            fail(join(path, "gamma_rad_per_s_per_T"), "must be nonzero");
        }
        n.gamma = *g;
    } else {
        auto it = nuclides.find(n.label);
        if (it == nuclides.end()) {
            fail(join(path, "label"), "unknown nuclide '" + n.label + "' and no gamma_rad_per_s_per_T given");
        }
        n.gamma = it->second;
    }
    return n;
}

const Json& member(const Json& doc, const std::string& path, const std::string& key) {
    if (!doc.contains(key)) {
        fail(join(path, key), "required field missing");
    }
    return require_object(doc.at(key), join(path, key));
}

}  // namespace

const char* to_string(SequenceKind kind) { return kind == SequenceKind::Noon ? "Noon" : "SingleQuantum"; }

const char* to_string(RunMode mode) { return mode == RunMode::MonteCarlo ? "mc" : "analytic"; }

RunMode run_mode_from_string(const std::string& name) {
    if (name == "analytic") {
        return RunMode::Analytic;
    }
    if (name == "mc") {
        return RunMode::MonteCarlo;
    }
    throw InputError("mode: expected 'analytic' or 'mc', got '" + name + "'");
}

std::string default_nuclide_path() { return std::string(NOONDIFF_DATA_DIR) + "/nuclides.json"; }

NuclideTable load_nuclide_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError(path + ": cannot open nuclide table");
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    require_object(doc, "");
    NuclideTable table;
    for (const auto& [label, entry] : doc.items()) {
        require_object(entry, label);
        table[label] = required_number(entry, label, "gamma_rad_per_s_per_T", Bound::Any);
    }
    return table;
}

double ExperimentDescriptor::q_gamma() const {
    if (sequence == SequenceKind::Noon) {
        return spin::gamma_eff(system);
    }
    return observe == spin::SpinRole::Control ? system.control.gamma : system.target.gamma;
}

ExperimentDescriptor parse_descriptor(const Json& doc, const NuclideTable& nuclides) {
    require_object(doc, "");
    reject_unknown(doc, "",
                   {"name", "system", "sequence", "observe", "timing", "sweep", "diffusion", "fit", "mode", "seed"});
    ExperimentDescriptor d;
    if (doc.contains("name")) {
        d.name = text(doc, "", "name");
    }

    const Json& sys = member(doc, "", "system");
    reject_unknown(sys, "system", {"control", "target", "n_total", "j_coupling_Hz", "representation"});
    d.system.control = parse_nuclide(member(sys, "system", "control"), "system.control", nuclides);
    d.system.target = parse_nuclide(member(sys, "system", "target"), "system.target", nuclides);
    const auto n_total = integer(sys, "system", "n_total", 1);
    if (!n_total) {
        fail("system.n_total", "required field missing");
    }
    d.system.n_total = static_cast<int>(*n_total);
    d.system.j_coupling = number(sys, "system", "j_coupling_Hz", Bound::NonNegative).value_or(0.0);
    if (d.system.n_total >= 2 && !(d.system.j_coupling > 0.0)) {
        fail("system.j_coupling_Hz", "must be positive when targets are present");
    }
    if (sys.contains("representation")) {
        const std::string r = text(sys, "system", "representation");
        if (r == "dicke") {
            d.system.representation = spin::Representation::DickeSubspace;
        } else if (r == "full") {
            d.system.representation = spin::Representation::FullTensor;
        } else {
            fail("system.representation", "expected 'dicke' or 'full'");
        }
    }
    try {
        d.system.validate();
    } catch (const std::invalid_argument& e) {
        fail("system", e.what());
    }

    const std::string seq = text(doc, "", "sequence");
    if (seq == "SingleQuantum") {
        d.sequence = SequenceKind::SingleQuantum;
    } else if (seq == "Noon") {
        d.sequence = SequenceKind::Noon;
        if (d.system.n_total < 2) {
            fail("sequence", "Noon needs system.n_total >= 2");
        }
    } else {
        fail("sequence", "expected 'SingleQuantum' or 'Noon'");
    }
    d.observe = d.system.n_total > 1 ? spin::SpinRole::Target : spin::SpinRole::Control;
    if (doc.contains("observe")) {
        const std::string o = text(doc, "", "observe");
        if (o == "control") {
            d.observe = spin::SpinRole::Control;
        } else if (o == "target") {
            if (d.system.n_total < 2) {
                fail("observe", "single-spin system has no target");
            }
            d.observe = spin::SpinRole::Target;
        } else {
            fail("observe", "expected 'control' or 'target'");
        }
    }

    const Json& t = member(doc, "", "timing");
    reject_unknown(t, "timing",
                   {"big_delta_s", "little_delta_s", "shape_factor", "g2_T_per_m", "g3_T_per_m", "selection_delta_s"});
    d.timing.big_delta = required_number(t, "timing", "big_delta_s", Bound::Positive);
    d.timing.little_delta = required_number(t, "timing", "little_delta_s", Bound::Positive);
    d.timing.shape_factor = number(t, "timing", "shape_factor", Bound::Positive).value_or(1.0);
    d.timing.g2 = number(t, "timing", "g2_T_per_m", Bound::NonNegative).value_or(0.0);
    d.timing.g3 = number(t, "timing", "g3_T_per_m", Bound::NonNegative).value_or(0.0);
    d.timing.selection_delta = number(t, "timing", "selection_delta_s", Bound::NonNegative).value_or(0.0);

    const Json& sw = member(doc, "", "sweep");
    reject_unknown(sw, "sweep", {"g_max_T_per_m", "n_points"});
    d.sweep.g_max = required_number(sw, "sweep", "g_max_T_per_m", Bound::NonNegative);
    d.sweep.n_points = static_cast<int>(integer(sw, "sweep", "n_points", 3).value_or(21));
    if (!(d.sweep.g_max > 0.0)) {
        fail("sweep.g_max_T_per_m", "must be positive, otherwise every point repeats G = 0");
    }

    const Json& df = member(doc, "", "diffusion");
    reject_unknown(df, "diffusion",
                   {"d_true_m2_per_s", "n_walkers", "dt_s", "sub_steps_per_gradient", "batches", "t2_s"});
    d.diffusion.d_const = required_number(df, "diffusion", "d_true_m2_per_s", Bound::NonNegative);
    d.diffusion.n_walkers = integer(df, "diffusion", "n_walkers", 1).value_or(100000);
    d.diffusion.dt = number(df, "diffusion", "dt_s", Bound::Positive).value_or(1e-3);
    d.diffusion.sub_steps_per_gradient =
        static_cast<int>(integer(df, "diffusion", "sub_steps_per_gradient", 1).value_or(16));
    d.batches = static_cast<int>(integer(df, "diffusion", "batches", 2).value_or(10));
    if (d.batches > d.diffusion.n_walkers) {
        fail("diffusion.batches", "exceeds diffusion.n_walkers");
    }
    d.t2 = number(df, "diffusion", "t2_s", Bound::Positive);

    if (doc.contains("fit")) {
        const Json& f = member(doc, "", "fit");
        reject_unknown(f, "fit", {"method", "bootstrap_samples"});
        if (f.contains("method")) {
            try {
                d.fit.method = estimator::fit_method_from_string(text(f, "fit", "method"));
            } catch (const std::invalid_argument& e) {
                fail("fit.method", e.what());
            }
        }
        d.fit.bootstrap_samples = static_cast<int>(integer(f, "fit", "bootstrap_samples", 0).value_or(0));
    }

    if (doc.contains("mode")) {
        try {
            d.mode = run_mode_from_string(text(doc, "", "mode"));
        } catch (const InputError& e) {
            fail("mode", e.what());
        }
    }
    if (doc.contains("seed") && !doc.at("seed").is_null()) {
        if (!doc.at("seed").is_number_unsigned()) {
            fail("seed", "expected a non-negative integer");
        }
        d.seed = doc.at("seed").get<std::uint64_t>();
    }
    return d;
}

ExperimentDescriptor load_descriptor(const std::string& path, const NuclideTable& nuclides) {
    std::ifstream in(path);
    if (!in) {
        throw InputError(path + ": cannot open descriptor");
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("descriptor") && doc.contains("provenance")) {
        return parse_descriptor(doc.at("descriptor"), nuclides);
    }
    return parse_descriptor(doc, nuclides);
}

Json to_json(const ExperimentDescriptor& d) {
    Json j;
    j["name"] = d.name;
    auto nuclide = [](const spin::Nuclide& n) {
        Json x;
        x["label"] = n.label;
        x["gamma_rad_per_s_per_T"] = n.gamma;
        return x;
    };
    j["system"]["control"] = nuclide(d.system.control);
    j["system"]["target"] = nuclide(d.system.target);
    j["system"]["n_total"] = d.system.n_total;
    j["system"]["j_coupling_Hz"] = d.system.j_coupling;
    j["system"]["representation"] =
        d.system.representation == spin::Representation::FullTensor ? "full" : "dicke";
    j["sequence"] = to_string(d.sequence);
    j["observe"] = d.observe == spin::SpinRole::Control ? "control" : "target";
    j["timing"]["big_delta_s"] = d.timing.big_delta;
    j["timing"]["little_delta_s"] = d.timing.little_delta;
    j["timing"]["shape_factor"] = d.timing.shape_factor;
    j["timing"]["g2_T_per_m"] = d.timing.g2;
    j["timing"]["g3_T_per_m"] = d.timing.g3;
    j["timing"]["selection_delta_s"] = d.timing.selection_delta;
    j["sweep"]["g_max_T_per_m"] = d.sweep.g_max;
    j["sweep"]["n_points"] = d.sweep.n_points;
    j["diffusion"]["d_true_m2_per_s"] = d.diffusion.d_const;
    j["diffusion"]["n_walkers"] = d.diffusion.n_walkers;
    j["diffusion"]["dt_s"] = d.diffusion.dt;
    j["diffusion"]["sub_steps_per_gradient"] = d.diffusion.sub_steps_per_gradient;
    j["diffusion"]["batches"] = d.batches;
    j["diffusion"]["t2_s"] = d.t2 ? Json(*d.t2) : Json(nullptr);
    j["fit"]["method"] = estimator::to_string(d.fit.method);
    j["fit"]["bootstrap_samples"] = d.fit.bootstrap_samples;
    j["mode"] = to_string(d.mode);
    j["seed"] = d.seed ? Json(*d.seed) : Json(nullptr);
    return j;
}

}  // namespace noondiff::app
