#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "motionblur/motionblur.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(MOTIONBLUR_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("motionblur_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        phantom = (dir / "ph.fimg").string();
        ASSERT_EQ(run("phantom --kind blobs --output " + phantom).code, 0);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const char* name) const { return (dir / name).string(); }

    fs::path dir;
    std::string phantom;
};

}  // namespace

TEST_F(Cli, BlurRecordAndDeterminism) {
    const auto a = run("blur --input " + phantom + " --output " + path("a.fimg") + " --t1 2 --samples 20 --seed 5");
    const auto b = run("blur --input " + phantom + " --output " + path("b.fimg") + " --t1 2 --samples 20 --seed 5");
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(slurp(path("a.fimg")), slurp(path("b.fimg")));
    const auto j = json::parse(a.out);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["mode"], "mc");
    EXPECT_EQ(j["n_samples"], 20);
    EXPECT_EQ(j["seed"], 5);
    EXPECT_GT(j["rmse_vs_input"].get<double>(), 0.0);
}

TEST_F(Cli, TinyBlurSingleSampleIsNearIdentity) {
    const auto r = run("blur --input " + phantom + " --output " + path("t.fimg") + " --t1 1e-8 --samples 1");
    ASSERT_EQ(r.code, 0);
    EXPECT_LT(json::parse(r.out)["rmse_vs_input"].get<double>(), 1e-3);
}

TEST_F(Cli, DeblurReportsReferenceError) {
    ASSERT_EQ(run("blur --mode exact --input " + phantom + " --output " + path("b.fimg") + " --t1 2").code, 0);
    const auto r = run("deblur --input " + path("b.fimg") + " --output " + path("d.pgm") +
                       " --method wiener --t1 2 --epsilon 1e-4 --reference " + phantom);
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["method"], "wiener");
    EXPECT_EQ(j["epsilon"], 1e-4);
    EXPECT_LT(j["rmse_vs_reference"].get<double>(), j["blurred_rmse_vs_reference"].get<double>());
    EXPECT_TRUE(fs::exists(path("d.pgm")));
}

TEST_F(Cli, LaguerreSe2EndToEnd) {
    ASSERT_EQ(run("blur --input " + phantom + " --output " + path("b.fimg") + " --t1 2 --t2 0.02").code, 0);
    const auto r = run("deblur --input " + path("b.fimg") + " --output " + path("d.fimg") +
                       " --method laguerre-se2 --t1 2 --t2 0.02 --epsilon 1e-2 --order 24 --reference " + phantom);
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["order"], 24);
    EXPECT_LT(j["rmse_vs_reference"].get<double>(), j["blurred_rmse_vs_reference"].get<double>());
}

TEST_F(Cli, SweepReportRoundTrips) {
    ASSERT_EQ(run("blur --mode exact --input " + phantom + " --output " + path("b.fimg") + " --t1 2").code, 0);
    const auto r = run("sweep --input " + path("b.fimg") + " --reference " + phantom + " --report " +
                       path("r.json") + " --method wiener --t1 2 --epsilon 1e-1 1e-8");
    ASSERT_EQ(r.code, 0);
    const auto rows = json::parse(slurp(path("r.json")));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_LT(rows[1]["rmse"].get<double>(), rows[0]["rmse"].get<double>());
    EXPECT_TRUE(rows[1]["best"].get<bool>());
    EXPECT_FALSE(rows[0]["best"].get<bool>());
    EXPECT_EQ(rows[0]["schema_version"], 1);

    ASSERT_EQ(run("sweep --input " + path("b.fimg") + " --reference " + phantom + " --report " + path("one.json") +
                  " --method wiener --t1 2 --epsilon 1e-3")
                  .code,
              0);
    EXPECT_EQ(json::parse(slurp(path("one.json"))).size(), 1u);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("deblur --input " + path("missing.pgm") + " --output " + path("x.pgm") + " --method wiener --t1 1")
                  .code,
              2);
    EXPECT_EQ(run("deblur --input " + phantom + " --output " + path("x.pgm") + " --method nope").code, 1);
    EXPECT_EQ(run("deblur --input " + phantom + " --output " + path("x.pgm") + " --method wiener --t1 -2").code, 1);
    EXPECT_EQ(run("blur --input " + phantom + " --output " + path("x.pgm")).code, 1);  // t1 = t2 = 0
    EXPECT_EQ(run("frobnicate").code, 1);
    // 16 pixels cannot determine an order-20 fit
    ASSERT_EQ(run("phantom --width 4 --height 4 --output " + path("tiny.fimg")).code, 0);
    EXPECT_EQ(run("deblur --input " + path("tiny.fimg") + " --output " + path("x.pgm") + " --method hermite --t1 1 --order 20")
                  .code,
              3);
}

TEST_F(Cli, SelftestAndCorruptionHook) {
    const auto ok = run("selftest");
    EXPECT_EQ(ok.code, 0);
    std::istringstream lines(ok.out);
    int n = 0;
    for (std::string line; std::getline(lines, line); ++n) EXPECT_TRUE(json::parse(line)["pass"].get<bool>()) << line;
    EXPECT_EQ(n, 6);
    EXPECT_EQ(run("selftest --corrupt-bessel-table").code, 3);
}

TEST_F(Cli, FitWritesExpansionText) {
    const auto r = run("fit --input " + phantom + " --output " + path("e.txt") + " --basis hermite --order 12 --t1 2");
    ASSERT_EQ(r.code, 0);
    std::ifstream in(path("e.txt"));
    const auto e = motionblur::read_hermite(in);
    EXPECT_EQ(e.order, 12);
    EXPECT_NEAR(e.scale, json::parse(r.out)["scale"].get<double>(), 1e-12);
    EXPECT_GT(e.scale, 1.0);
}
