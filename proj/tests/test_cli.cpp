#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "artifacts.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace levypop;
using namespace levypop::cli;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::path(LEVYPOP_TEST_TMP) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args) {
    const std::string cmd = std::string(LEVYPOP_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream(p) << s;
}

}  // namespace

TEST(RunConfig, PrecedenceDefaultsFileFlags) {
    const auto dir = scratch("cfg_precedence");
    write_text(dir / "a.ini", "[model]\nq = 3\n[noise]\nepsilon = 0.2\n");
    RunConfig cfg;
    EXPECT_EQ(cfg.num("model.q"), 2.0);
    cfg.load_file((dir / "a.ini").string());
    EXPECT_EQ(cfg.num("model.q"), 3.0);
    cfg.set("model.q", "4");
    EXPECT_EQ(std::get<GrowthParams>(cfg.model()).q, 4.0);
    EXPECT_EQ(std::get<GrowthParams>(cfg.model()).epsilon, 0.2);
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
    const auto dir = scratch("cfg_bad");
    write_text(dir / "a.ini", "[model]\nqq = 3\n");
    RunConfig cfg;
    EXPECT_THROW(cfg.load_file((dir / "a.ini").string()), ConfigError);
    EXPECT_THROW(cfg.set("nope.key", "1"), ConfigError);
    cfg.set("model.q", "x1");
    EXPECT_THROW((void)cfg.num("model.q"), ConfigError);
    cfg.set("model.kind", "other");
    EXPECT_THROW((void)cfg.model(), ConfigError);
    cfg.set("run.seed", "-3");
    EXPECT_THROW((void)cfg.seed(), ConfigError);
}

TEST(RunConfig, ResolvedIniRoundTrips) {
    const auto dir = scratch("cfg_roundtrip");
    RunConfig a;
    a.set("model.kind", "logistic");
    a.set("sweep.values", "1, 2,3");
    a.resolve_model_defaults();
    EXPECT_EQ(a.num("model.s"), 0.2);
    EXPECT_EQ(a.list("sweep.values"), (std::vector<double>{1.0, 2.0, 3.0}));
    write_text(dir / "r.ini", a.to_ini() + "\n[manifest]\nsubcommand = x\n");
    RunConfig b;
    b.load_file((dir / "r.ini").string());
    EXPECT_EQ(a.to_ini(), b.to_ini());
}

TEST(Artifacts, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(fmt(0.1), "0.1");
    EXPECT_EQ(fmt(1.0 / 3.0), "0.333333333333");
}

TEST(Cli, EquilibriaCsv) {
    const auto dir = scratch("cli_eq");
    ASSERT_EQ(run("equilibria --model.p 1 --model.q 2 --model.s 1 --output.dir " + dir.string()), 0);
    const std::string csv = read_file(dir / "equilibria.csv");
    EXPECT_NE(csv.find("location,derivative,stability,admissible\n0,1,unstable,true\n0.69314718056,"),
              std::string::npos);
    EXPECT_NE(csv.find(",stable,true\n"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "equilibria.manifest.ini"));
}

TEST(Cli, ExitCodes) {
    const auto dir = scratch("cli_exit");
    const std::string out = " --output.dir " + dir.string();
    EXPECT_EQ(run("no-such-command"), 1);
    EXPECT_EQ(run("equilibria --no-such-flag 1" + out), 1);
    EXPECT_EQ(run("equilibria --model.q abc" + out), 2);
    write_text(dir / "broken.ini", "[model\n");
    EXPECT_EQ(run("equilibria --config " + (dir / "broken.ini").string() + out), 2);
    EXPECT_EQ(run("solve-fpe --noise.epsilon 0.1 --solver.dt 10" + out), 2);
    EXPECT_EQ(run("equilibria --model.p -1" + out), 4);
    EXPECT_EQ(run("stationary-gaussian --noise.sigma 0" + out), 4);
    // A drift that drives every path past the overflow guard.
    EXPECT_EQ(run("simulate-path --model.q 1e300 --path.dt 0.5 --path.t_end 5" + out), 3);
}

TEST(Cli, SimulatePathDeterministicAndRerunFromManifest) {
    const auto a = scratch("cli_det_a");
    const auto b = scratch("cli_det_b");
    const std::string args = "simulate-path --noise.sigma 0.1 --noise.epsilon 0.1 --path.t_end 3 --run.seed 7";
    ASSERT_EQ(run(args + " --output.dir " + a.string()), 0);
    ASSERT_EQ(run(args + " --output.dir " + b.string()), 0);
    EXPECT_EQ(read_file(a / "simulate-path.csv"), read_file(b / "simulate-path.csv"));

    const auto c = scratch("cli_det_c");
    ASSERT_EQ(run("simulate-path --config " + (a / "simulate-path.manifest.ini").string() + " --output.dir " +
                  c.string()),
              0);
    EXPECT_EQ(read_file(a / "simulate-path.csv"), read_file(c / "simulate-path.csv"));

    const auto d = scratch("cli_det_d");
    ASSERT_EQ(run("simulate-path --noise.sigma 0.1 --noise.epsilon 0.1 --path.t_end 3 --run.seed 8 --output.dir " +
                  d.string()),
              0);
    EXPECT_NE(read_file(a / "simulate-path.csv"), read_file(d / "simulate-path.csv"));
}

TEST(Cli, ConfigFileIsNotModified) {
    const auto dir = scratch("cli_nomutate");
    const std::string text = "[model]\nq = 3\n\n[output]\nname = run1\n";
    write_text(dir / "in.ini", text);
    ASSERT_EQ(run("potential --config " + (dir / "in.ini").string() + " --output.dir " + dir.string()), 0);
    EXPECT_EQ(read_file(dir / "in.ini"), text);
    EXPECT_TRUE(fs::exists(dir / "run1.csv"));
}

TEST(Cli, ManifestHashesMatchFiles) {
    const auto dir = scratch("cli_hash");
    ASSERT_EQ(run("reproduce-figure fig7 --output.dir " + dir.string()), 0);
    const std::string manifest = read_file(dir / "fig7.manifest.ini");
    for (const char* f : {"fig7a.csv", "fig7b.csv", "fig7c.csv"}) {
        EXPECT_NE(manifest.find(sha256_hex(read_file(dir / f))), std::string::npos) << f;
    }
    EXPECT_NE(manifest.find("target = fig7"), std::string::npos);
}

TEST(Cli, EnvironmentSelectsOutputDirectory) {
    const auto dir = scratch("cli_env");
    const std::string cmd = "LEVYPOP_OUT=" + dir.string() + " " + LEVYPOP_CLI + " diagram > /dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_TRUE(fs::exists(dir / "diagram.csv"));
}
