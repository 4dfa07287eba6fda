#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "noondiff/app/commands.hpp"
#include "noondiff/app/csv.hpp"
#include "noondiff/app/descriptor.hpp"

using namespace noondiff;
using namespace noondiff::app;
namespace fs = std::filesystem;

namespace {

const std::string kSource = NOONDIFF_SOURCE_DIR;
const std::string kCli = NOONDIFF_CLI;

NuclideTable nuclides() { return load_nuclide_table(kSource + "/data/nuclides.json"); }

Json sq_doc() {
    std::ifstream in(kSource + "/descriptors/am9_sq.json");
    return Json::parse(in);
}

std::string error_of(const Json& doc) {
    try {
        parse_descriptor(doc, nuclides());
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

std::string csv_error_of(const std::string& text) {
    std::istringstream in(text);
    try {
        read_curve_csv(in, "x.csv");
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("noondiff_app_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

int run(const std::string& args) {
    const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

TEST(Descriptor, ParsesShippedDescriptors) {
    const auto sq = load_descriptor(kSource + "/descriptors/am9_sq.json", nuclides());
    EXPECT_EQ(sq.sequence, SequenceKind::SingleQuantum);
    EXPECT_EQ(sq.system.n_total, 10);
    EXPECT_EQ(sq.sweep.n_points, 21);
    EXPECT_DOUBLE_EQ(sq.q_gamma(), 2.6752e8);
    const auto noon = load_descriptor(kSource + "/descriptors/am9_noon.json", nuclides());
    EXPECT_EQ(noon.sequence, SequenceKind::Noon);
    EXPECT_NEAR(noon.q_gamma(), 1.0839e8 + 9 * 2.6752e8, 1e-3);
}

TEST(Descriptor, CanonicalJsonRoundTrip) {
    const auto d = parse_descriptor(sq_doc(), nuclides());
    const Json once = to_json(d);
    EXPECT_EQ(to_json(parse_descriptor(once, nuclides())), once);
}

TEST(Descriptor, ErrorsNameTheField) {
    auto doc = sq_doc();
    doc["timing"]["little_delta_s"] = -1.0;
    EXPECT_NE(error_of(doc).find("timing.little_delta_s"), std::string::npos);
    doc = sq_doc();
    doc["sweep"]["n_points"] = 2;
    EXPECT_NE(error_of(doc).find("sweep.n_points"), std::string::npos);
    doc = sq_doc();
    doc["sweep"]["g_max_T_per_m"] = 0.0;
    EXPECT_NE(error_of(doc).find("sweep.g_max_T_per_m"), std::string::npos);
    doc = sq_doc();
    doc["system"]["target"]["label"] = "Xx99";
    EXPECT_NE(error_of(doc).find("system.target"), std::string::npos);
    doc = sq_doc();
    doc["timing"]["colour"] = 1;
    EXPECT_NE(error_of(doc).find("timing.colour"), std::string::npos);
    doc = sq_doc();
    doc["sequence"] = "Triple";
    EXPECT_NE(error_of(doc).find("sequence"), std::string::npos);
    doc = sq_doc();
    doc.erase("system");
    EXPECT_NE(error_of(doc).find("system"), std::string::npos);
    doc = sq_doc();
    doc["diffusion"]["d_true_m2_per_s"] = "fast";
    EXPECT_NE(error_of(doc).find("diffusion.d_true_m2_per_s"), std::string::npos);
}

TEST(Descriptor, ResolveNeedsSeed) {
    auto d = parse_descriptor(sq_doc(), nuclides());
    d.seed.reset();
    EXPECT_THROW(resolve(d, std::nullopt, std::nullopt), InputError);
    EXPECT_EQ(resolve(d, RunMode::MonteCarlo, 5).seed, 5u);
}

TEST(Csv, WriteReadRoundTripIsExact) {
    AttenuationCurve c;
    c.points = {{0.0, 1.0, 0.0}, {0.1, 0.123456789012345678, 1e-3}, {0.2, 1.0 / 3.0, {}}};
    std::stringstream s;
    write_curve_csv(s, c);
    const auto back = read_curve_csv(s);
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(back[i].g, c.points[i].g);
        EXPECT_EQ(back[i].s, c.points[i].s);
        EXPECT_EQ(back[i].sigma, c.points[i].sigma);
    }
}

TEST(Csv, MalformedInputReportsLine) {
    EXPECT_NE(csv_error_of("g_T_per_m,s_norm,s_stderr\n").find("no data rows"), std::string::npos);
    EXPECT_NE(csv_error_of("g_T_per_m,s_norm,s_stderr\n0,1,\n0.1,abc,\n").find("x.csv:3"), std::string::npos);
    EXPECT_NE(csv_error_of("g_T_per_m,s_norm,s_stderr\n0,1,\n0.1\n").find("x.csv:3"), std::string::npos);
    EXPECT_NE(csv_error_of("g,s\n0,1\n").find("x.csv:1"), std::string::npos);
    EXPECT_EQ(csv_error_of("g_T_per_m,s_norm,s_stderr\n0,1,\n0.1,0.9,0.01\n"), "");
}

TEST(Commands, ExitCodeMapping) {
    EXPECT_EQ(exit_code_for(InputError("x")), kExitInput);
    EXPECT_EQ(exit_code_for(std::invalid_argument("x")), kExitInput);
    EXPECT_EQ(exit_code_for(DegenerateCurveError("x")), kExitPhysics);
    EXPECT_EQ(exit_code_for(std::domain_error("x")), kExitPhysics);
    EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitFailure);
}

TEST(Commands, AnalyticRunRecoversD) {
    const auto d = parse_descriptor(sq_doc(), nuclides());
    Provenance p;
    p.version = tool_version();
    const auto report = run_experiment(d, p);
    ASSERT_TRUE(report.fit.has_value());
    EXPECT_NEAR(report.fit->d_fit / 6.24e-10, 1.0, 1e-6);
    EXPECT_EQ(report.curve.points.size(), 21u);
    EXPECT_EQ(display_d(6.24e-10, 0.06e-10), "(6.24 +- 0.06) x 10^-10 m^2/s");
}

TEST(Commands, FitCurveRejectsFlatCurve) {
    std::vector<CurvePoint> flat = {{0.0, 1.0, {}}, {0.1, 1.0, {}}, {0.2, 1.0, {}}};
    EXPECT_THROW(fit_curve(flat, 2e-3, 0.05, 2.6752e8, {}), DegenerateCurveError);
    EXPECT_THROW(fit_curve({{0.0, 1.0, {}}}, 2e-3, 0.05, 2.6752e8, {}), std::invalid_argument);
}

TEST(Cli, SimulateIsDeterministicAndRoundTrips) {
    TempDir tmp;
    const std::string desc = kSource + "/descriptors/am9_sq.json";
    ASSERT_EQ(run("simulate --descriptor " + desc + " --output " + (tmp / "a")), 0);
    ASSERT_EQ(run("simulate --descriptor " + desc + " --output " + (tmp / "b")), 0);
    for (const char* f : {"curve.csv", "report.json", "plot.dat"}) {
        EXPECT_EQ(slurp(tmp / (std::string("a/") + f)), slurp(tmp / (std::string("b/") + f))) << f;
    }
    // Report fed back reproduces the run.
    ASSERT_EQ(run("simulate --descriptor " + (tmp / "a/report.json") + " --output " + (tmp / "c")), 0);
    EXPECT_EQ(slurp(tmp / "a/report.json"), slurp(tmp / "c/report.json"));
    // CSV fit reproduces the report's fit.
    ASSERT_EQ(run("fit --csv " + (tmp / "a/curve.csv") + " --descriptor " + desc + " --output " + (tmp / "f")), 0);
    const auto report = Json::parse(slurp(tmp / "a/report.json"));
    const auto fit = Json::parse(slurp(tmp / "f/fit.json"));
    EXPECT_EQ(fit["d_m2_per_s"], report["fit"]["d_m2_per_s"]);
    EXPECT_EQ(fit["d_sigma_m2_per_s"], report["fit"]["d_sigma_m2_per_s"]);
}

TEST(Cli, InputErrorsExitTwo) {
    TempDir tmp;
    write_text(tmp / "empty.csv", "g_T_per_m,s_norm,s_stderr\n");
    write_text(tmp / "bad.csv", "g_T_per_m,s_norm,s_stderr\n0,1,\n0.1,x,\n0.2,0.5,\n");
    const std::string timing = " --little-delta-s 0.002 --big-delta-s 0.05 --q-gamma 2.6752e8 --bootstrap 0";
    EXPECT_EQ(run("fit --csv " + (tmp / "empty.csv") + timing), 2);
    EXPECT_EQ(run("fit --csv " + (tmp / "bad.csv") + timing), 2);
    EXPECT_EQ(run("fit --csv " + (tmp / "missing.csv") + timing), 2);
    EXPECT_EQ(run("stokes --temperature-K -300 --viscosity-Pa-s 1e-3 --radius-m 1e-9"), 2);
    EXPECT_EQ(run("simulate --output " + (tmp / "x")), 2);
    EXPECT_EQ(run("frobnicate"), 2);

    auto doc = sq_doc();
    doc.erase("seed");
    write_text(tmp / "noseed.json", doc.dump());
    EXPECT_EQ(run("simulate --descriptor " + (tmp / "noseed.json") + " --output " + (tmp / "y")), 2);
    EXPECT_EQ(run("simulate --descriptor " + (tmp / "noseed.json") + " --seed 3 --output " + (tmp / "y")), 0);
    write_text(tmp / "broken.json", "{\"name\": ");
    EXPECT_EQ(run("simulate --descriptor " + (tmp / "broken.json") + " --output " + (tmp / "z")), 2);
}

TEST(Cli, PhysicsErrorsExitThree) {
    TempDir tmp;
    write_text(tmp / "flat.csv", "g_T_per_m,s_norm,s_stderr\n0,1,\n0.1,1,\n0.2,1,\n");
    EXPECT_EQ(run("fit --csv " + (tmp / "flat.csv") +
                  " --little-delta-s 0.002 --big-delta-s 0.05 --q-gamma 2.6752e8 --bootstrap 0"),
              3);
    auto doc = sq_doc();
    doc["timing"]["big_delta_s"] = 0.001;
    write_text(tmp / "short.json", doc.dump());
    EXPECT_EQ(run("simulate --descriptor " + (tmp / "short.json") + " --output " + (tmp / "s")), 3);
}

TEST(Cli, SpectrumOfSingleSpin) {
    TempDir tmp;
    auto doc = sq_doc();
    doc["system"]["n_total"] = 1;
    doc["observe"] = "control";
    write_text(tmp / "one.json", doc.dump());
    ASSERT_EQ(run("spectrum --descriptor " + (tmp / "one.json") + " --output " + (tmp / "sp")), 0);
    std::istringstream in(slurp(tmp / "sp/spectrum.csv"));
    std::string header, row, extra;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "offset_Hz,intensity");
    EXPECT_EQ(row.substr(0, 2), "0,");
    EXPECT_FALSE(std::getline(in, extra) && !extra.empty());
    doc["observe"] = "target";
    write_text(tmp / "one_target.json", doc.dump());
    EXPECT_EQ(run("spectrum --descriptor " + (tmp / "one_target.json")), 2);
}
