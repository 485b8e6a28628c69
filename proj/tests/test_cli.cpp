#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "daekit/cli.hpp"

namespace fs = std::filesystem;
using daekit::cli::RunConfig;
using nlohmann::json;

namespace {

struct CliResult {
    int code = 0;
    std::string err;
};

CliResult invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "daekit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = 0;
    std::optional<RunConfig> cfg =
        daekit::cli::parse_args(static_cast<int>(argv.size()), argv.data(), code, out, err);
    if (!cfg) return {code, err.str()};
    return {daekit::cli::run(*cfg, err), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("daekit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

}  // namespace

TEST_F(CliTest, NanorodPipelinePassesVerification) {
    ASSERT_EQ(invoke({"example", "nanorod", "--n-grid", "50", "--out", dir.string()}).code, 0);
    json model = load(dir / "nanorod.json");
    EXPECT_EQ(model["n"], 250);
    EXPECT_EQ(model["provenance"]["grid"]["n_grid"], 50);
    CliResult r = invoke({"verify-ph", "--input", path("nanorod.json"), "--out", dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    json rep = load(dir / "ph_report.json");
    EXPECT_TRUE(rep["ph"]["checks"]["passed"].get<bool>());
    EXPECT_EQ(rep["seed"], 42);
    EXPECT_EQ(rep["config"]["command"], "verify-ph");
}

TEST_F(CliTest, InadmissibleStateExitsWithVerificationFailure) {
    ASSERT_EQ(invoke({"example", "zero-dyn", "--m", "4", "--out", dir.string()}).code, 0);
    CliResult r = invoke({"simulate", "--input", path("zero-dyn.json"), "--x0", "1,1,1,1,1",
                          "--out", dir.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("InconsistentInitialState"), std::string::npos) << r.err;
    json rep = load(dir / "simulate.json");
    EXPECT_EQ(rep["error"]["code"], "InconsistentInitialState");
}

TEST_F(CliTest, AdmissibleSimulationWritesTrajectory) {
    ASSERT_EQ(invoke({"example", "zero-dyn", "--out", dir.string()}).code, 0);
    std::ofstream(path("z0.json")) << "[1, 0.5, [0.2, -0.1], 0, 1]";
    CliResult r = invoke({"simulate", "--input", path("zero-dyn.json"), "--z0-file", path("z0.json"),
                          "--t-end", "1", "--num-times", "41", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    json rep = load(dir / "simulate.json");
    EXPECT_LE(rep["solver_agreement"].get<double>(), 1e-5);
    EXPECT_LE(rep["mild_residual"]["contour"].get<double>(), 1e-6);
    EXPECT_LE(rep["mild_residual"]["weierstrass"].get<double>(), 1e-6);
    const std::string csv = slurp(dir / "trajectory.csv");
    EXPECT_EQ(csv.rfind("t,", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 42);
}

TEST_F(CliTest, NanorodSimulationHasHamiltonianColumn) {
    ASSERT_EQ(invoke({"example", "nanorod", "--n-grid", "4", "--out", dir.string()}).code, 0);
    std::string z0 = "[";
    for (int i = 0; i < 20; ++i) z0 += (i ? "," : "") + std::to_string(1.0 / (1 + i));
    std::ofstream(path("z0.json")) << z0 << "]";
    CliResult r = invoke({"simulate", "--input", path("nanorod.json"), "--z0-file", path("z0.json"),
                          "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(dir / "trajectory.csv");
    EXPECT_NE(csv.substr(0, csv.find('\n')).find(",H"), std::string::npos);
    json rep = load(dir / "simulate.json");
    EXPECT_LE(rep["hamiltonian"]["max_increase"].get<double>(),
              1e-8 * rep["hamiltonian"]["initial"].get<double>());
}

TEST_F(CliTest, L2IndicesReport) {
    ASSERT_EQ(invoke({"example", "l2", "--K", "40", "--out", dir.string()}).code, 0);
    CliResult r = invoke({"indices", "--input", path("l2.json"), "--imag-max", "8000",
                          "--radiality-p", "1", "--box-radius", "1000", "--radiality-samples", "20",
                          "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    json rep = load(dir / "indices.json");
    EXPECT_EQ(rep["indices"]["real"]["index"], 2);
    EXPECT_EQ(rep["indices"]["complex"]["index"], 3);
}

TEST_F(CliTest, OutputsAreByteIdentical) {
    ASSERT_EQ(invoke({"example", "zero-dyn", "--out", dir.string()}).code, 0);
    const std::vector<std::string> args{"analyze", "--input", path("zero-dyn.json"),
                                        "--radiality-samples", "20", "--out", dir.string()};
    ASSERT_EQ(invoke(args).code, 0);
    const std::string first = slurp(dir / "analyze.json");
    ASSERT_EQ(invoke(args).code, 0);
    EXPECT_EQ(first, slurp(dir / "analyze.json"));
    json rep = json::parse(first);
    EXPECT_EQ(rep["indices"]["nilpotency"], 2);
    EXPECT_EQ(rep["config"]["indices"]["radiality_samples"], 20);
    EXPECT_EQ(rep["decomposition"]["nilpotency_index"], 2);
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
    std::ofstream(path("run.ini")) << "seed=7\nm=3\n";
    ASSERT_EQ(invoke({"example", "zero-dyn", "--config", path("run.ini"), "--m", "5", "--out",
                      dir.string()})
                  .code,
              0);
    json model = load(dir / "zero-dyn.json");
    EXPECT_EQ(model["n"], 6);
    EXPECT_EQ(model["provenance"]["seed"], 7);
}

TEST_F(CliTest, DecomposeEmitsBlocks) {
    ASSERT_EQ(invoke({"example", "zero-dyn", "--out", dir.string()}).code, 0);
    ASSERT_EQ(invoke({"decompose", "--input", path("zero-dyn.json"), "--out", dir.string()}).code, 0);
    json rep = load(dir / "decomposition.json");
    EXPECT_EQ(rep["decomposition"]["dims"]["d1"], 3);
    EXPECT_EQ(rep["decomposition"]["dims"]["d2"], 2);
    EXPECT_LE(rep["decomposition"]["residuals"]["reconstruction"].get<double>(), 1e-8);
}

TEST_F(CliTest, InputErrorsExitWithTwo) {
    CliResult missing = invoke({"decompose", "--out", dir.string()});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("\"error\""), std::string::npos);
    EXPECT_EQ(invoke({"decompose", "--input", path("nope.json"), "--out", dir.string()}).code, 2);
    std::ofstream(path("bad.json")) << "{\"n\": 2, \"E\": [[1]]}";
    EXPECT_EQ(invoke({"decompose", "--input", path("bad.json"), "--out", dir.string()}).code, 2);
    EXPECT_EQ(invoke({"example", "cube"}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    ASSERT_EQ(invoke({"example", "zero-dyn", "--out", dir.string()}).code, 0);
    EXPECT_EQ(invoke({"verify-ph", "--input", path("zero-dyn.json"), "--out", dir.string()}).code, 2);
}

TEST_F(CliTest, FailedStructureExitsWithOne) {
    json j = {{"n", 1},
              {"E", {{{1.0, 0.0}}}},
              {"A", {{{1.0, 0.0}}}},
              {"Q", {{{1.0, 0.0}}}}};
    std::ofstream(path("growing.json")) << j.dump();
    CliResult r = invoke({"verify-ph", "--input", path("growing.json"), "--out", dir.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(load(dir / "ph_report.json")["ph"]["checks"]["dissipative"].get<bool>());
}
