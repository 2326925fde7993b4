// End-to-end tests of the pendulum-vib executable
#include <json.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string &args) {
    const std::string cmd = std::string(PENDULUM_VIB_CLI) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string sample(const char *name) { return std::string(SAMPLES_DIR) + "/" + name; }

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const char *name) {
    const fs::path p = fs::temp_directory_path() / "pendulum_vib_cli_test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

TEST(CliTest, MomentsVerticalKapitsa) {
    const auto r = run("moments --excitation " + sample("vertical_kapitsa.json"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_DOUBLE_EQ(j["averaged_params"]["A"].get<double>(), 2.0);
    EXPECT_EQ(j["averaged_params"]["C"].get<double>(), 0.0);
    EXPECT_TRUE(j["symmetry"]["passed"].get<bool>());
}

TEST(CliTest, MomentsAsymmetricIsScientificFailure) {
    const auto r = run("moments --excitation " + sample("in_phase_horizontal.json"));
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(json::parse(r.out)["symmetry"]["passed"].get<bool>());
}

TEST(CliTest, MomentsOfRestingPivot) {
    const auto r = run("moments --excitation " + sample("none.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["averaged_params"]["A"].get<double>(), 0.0);
}

TEST(CliTest, MissingFileIsInputError) {
    EXPECT_EQ(run("moments --excitation /nonexistent.json").code, 1);
    EXPECT_EQ(run("bogus").code, 1);
}

TEST(CliTest, CurveEndsAtThreshold) {
    const auto r = run("curve --samples 50");
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line, last;
    int rows = 0;
    std::getline(in, line);
    EXPECT_EQ(line, "phi,a_minus_c,b");
    while (std::getline(in, line)) {
        last = line;
        ++rows;
    }
    EXPECT_EQ(rows, 50);
    const auto c1 = last.find(',');
    const auto c2 = last.find(',', c1 + 1);
    EXPECT_NEAR(std::stod(last.substr(c1 + 1, c2 - c1 - 1)), 1.0, 1e-12);
    EXPECT_NEAR(std::stod(last.substr(c2 + 1)), 0.0, 1e-12);
}

TEST(CliTest, DomainLabels) {
    auto r = run("domain --a-minus-c 0 --b 0.1");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "I\n");
    r = run("domain --a-minus-c 3.5 --b 0.01");
    EXPECT_EQ(r.out, "II\n");
    EXPECT_EQ(run("domain --a-minus-c 2 --b 0").code, 1);
}

TEST(CliTest, EquilibriaOfKapitsaCase) {
    const auto r = run("equilibria --a-minus-c 2 --b 0");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    ASSERT_EQ(j["equilibria"].size(), 3u);
    EXPECT_EQ(j["equilibria"][2]["kind"], "stable");
    EXPECT_FALSE(j.contains("domain"));
}

TEST(CliTest, EquilibriaFromExcitation) {
    const auto r = run("equilibria --excitation " + sample("vertical_kapitsa.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["equilibria"].size(), 3u);
    EXPECT_EQ(run("equilibria --excitation " + sample("in_phase_horizontal.json")).code, 1);
}

TEST(CliTest, PortraitIsDeterministic) {
    const auto a = scratch("portrait_a");
    const auto b = scratch("portrait_b");
    const std::string args = "portrait --a-minus-c 3.5 --b 0.01 --nx 96 --ny 80 --out ";
    ASSERT_EQ(run(args + a.string()).code, 0);
    ASSERT_EQ(run(args + b.string()).code, 0);
    for (const char *f : {"grid.csv", "contours.csv", "portrait.svg"}) {
        const auto ca = slurp(a / f);
        EXPECT_FALSE(ca.empty()) << f;
        EXPECT_EQ(ca, slurp(b / f)) << f;
    }
}

TEST(CliTest, CompareRestingPivot) {
    const auto r = run("compare --excitation " + sample("none.json") + " --t-end 2");
    EXPECT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    for (const auto &e : j["max_err_phi"]) {
        EXPECT_LT(e.get<double>(), 1e-8);
    }
}

TEST(CliTest, CompareVerticalInBand) {
    const auto r = run("compare --excitation " + sample("vertical_sin.json"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["passed"].get<bool>());
    ASSERT_EQ(j["ratio_phi"].size(), 2u);
    for (const auto &ratio : j["ratio_phi"]) {
        EXPECT_GE(ratio.get<double>(), 1.4);
        EXPECT_LE(ratio.get<double>(), 3.5);
    }
}

TEST(CliTest, CompareAsymmetricReportsSymmetry) {
    const auto r = run("compare --excitation " + sample("in_phase_horizontal.json"));
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(json::parse(r.out)["symmetry"]["passed"].get<bool>());
}

TEST(CliTest, CompareRejectsIncreasingSweep) {
    EXPECT_EQ(run("compare --excitation " + sample("vertical_sin.json") +
                  " --eps-sweep 0.05,0.1")
                  .code,
              1);
}

TEST(CliTest, SimulateWritesTrajectory) {
    const auto r = run("simulate --excitation " + sample("vertical_sin.json") +
                       " --t-end 1 --averaged --step 0.01");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("t,phi,alpha,p_phi,p_alpha\n", 0), 0u);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 102);
}

TEST(CliTest, ReproduceWritesArtifacts) {
    const auto dir = scratch("reproduce");
    const auto r = run("reproduce --out " + dir.string() +
                       " --tag fixed --nx 64 --ny 64 --sweep-n 11");
    ASSERT_EQ(r.code, 0);
    for (const char *f : {"gamma.csv", "domains.csv", "portrait_domain_I/portrait.svg",
                          "portrait_domain_II/portrait.svg"}) {
        EXPECT_TRUE(fs::exists(dir / "fixed" / f)) << f;
    }
}

} // namespace
