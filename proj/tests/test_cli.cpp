#include <gtest/gtest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coxclaims/config.hpp"
#include "coxclaims/pascal.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(COXCLAIMS_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("coxclaims_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }
  std::string reference(const std::string& extra = "", const std::string& delay =
                            R"({"family": "exponential", "params": {"rate": 1}})") {
    return config("ref.json", R"({"g": 2, "gamma": [[0.9, 0.1], [0.2, 0.8]],
      "pi1": [0.6666666666666666, 0.3333333333333334], "shapes": [1, 3], "theta": 0.5,
      "grid": [0, 1, 2, 3], "exposures": [1, 1, 1], "delay": )" + delay + extra + "}");
  }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateIsDeterministic) {
  const std::string cfg = reference(R"(, "seed": 17)");
  const fs::path a = dir_ / "a.csv", b = dir_ / "b.csv";
  ASSERT_EQ(run("--config " + cfg + " simulate --replications 20 --out " + a.string()).code, 0);
  ASSERT_EQ(run("--config " + cfg + " simulate --replications 20 --out " + b.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(lines(slurp(a)).front(), "replication,arrival,delay,report_time,period");
  const auto c = run("--config " + cfg + " simulate --seed 18");
  EXPECT_EQ(lines(c.out).front(), "arrival,delay,report_time,period");
  EXPECT_NE(c.out, run("--config " + cfg + " simulate").out);
}

TEST_F(Cli, SimulateVanishingScaleIsHeaderOnly) {
  const std::string cfg = config("zero.json", R"({"g": 1, "gamma": [[1]], "pi1": [1],
    "shapes": [2], "theta": 1e-300, "grid": [0, 1, 2], "exposures": [1, 1], "seed": 1})");
  const Result r = run("--config " + cfg + " simulate --replications 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "arrival,delay,report_time,period\n");
}

TEST_F(Cli, SimulateTenThousandReplicationsIsFast) {
  const std::string cfg = reference(R"(, "seed": 3)");
  const auto start = std::chrono::steady_clock::now();
  const Result r = run("--config " + cfg + " simulate --replications 10000 --out " + (dir_ / "big.csv").string());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(r.code, 0);
  EXPECT_LT(secs, 10.0);
}

TEST_F(Cli, SimulateNeedsSeed) {
  EXPECT_EQ(run("--config " + reference() + " simulate").code, 2);
}

TEST_F(Cli, DistIbnrWithoutDelayIsPointMass) {
  const std::string cfg = reference("", R"({"family": "degenerate", "params": {"c": 0}})");
  const Result r = run("--config " + cfg + " dist --which ibnr");
  EXPECT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0].rfind("# tail_bound=", 0), 0u);
  EXPECT_EQ(l[1], "n,probability");
  EXPECT_EQ(l[2], "0,1.0");
}

TEST_F(Cli, DistPeriodMarginalSingleState) {
  const std::string cfg = config("one.json", R"({"g": 1, "gamma": [1], "pi1": [1],
    "shapes": [3], "theta": 0.7, "grid": [0, 2], "exposures": [1.5]})");
  const Result r = run("--config " + cfg + " dist --which period-marginal --n-max 12");
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 15u);
  for (long n = 0; n <= 12; ++n) {
    const std::string& row = l[n + 2];
    EXPECT_EQ(std::stol(row.substr(0, row.find(','))), n);
    EXPECT_NEAR(std::stod(row.substr(row.find(',') + 1)), coxclaims::pascal_pmf(n, 3, 2 * 1.5 * 0.7),
                1e-16);
  }
}

TEST_F(Cli, DistReportedVerifies) {
  const Result r = run("--config " + reference(R"(, "seed": 5)") + " dist --which reported --verify");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("result=pass"), std::string::npos) << r.out;
}

TEST_F(Cli, DistAccuracyFailureAndMonteCarloFallback) {
  const std::string cfg = config("wide.json", R"({"g": 2, "gamma": [[0.9, 0.1], [0.2, 0.8]],
    "pi1": [0.5, 0.5], "shapes": [1, 3], "theta": 0.5, "grid": [0, 100000, 100001],
    "exposures": [1, 1], "delay": {"family": "exponential", "params": {"rate": 1}}, "seed": 4})");
  EXPECT_EQ(run("--config " + cfg + " dist --which reported").code, 4);
  const Result r = run("--config " + cfg + " dist --which reported --mc 200");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).front(), "# method=monte-carlo replications=200");
}

TEST_F(Cli, AcfReferenceDecaysGeometrically) {
  const Result r = run("--config " + reference() + " acf --max-lag 6");
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 8u);
  EXPECT_EQ(l[0], "# path=spectral");
  EXPECT_EQ(l[1], "k,rho");
  std::vector<double> rho;
  for (int k = 1; k <= 6; ++k) rho.push_back(std::stod(l[k + 1].substr(l[k + 1].find(',') + 1)));
  for (int k = 1; k < 6; ++k) EXPECT_NEAR(rho[k] / rho[k - 1], 0.7, 1e-12);
}

TEST_F(Cli, AcfSingleStateIsZero) {
  const std::string cfg = config("one.json", R"({"g": 1, "gamma": [1], "pi1": [1],
    "shapes": [3], "theta": 0.7, "grid": [0, 1], "exposures": [1]})");
  const auto l = lines(run("--config " + cfg + " acf --max-lag 3").out);
  ASSERT_EQ(l.size(), 5u);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(l[k + 1], std::to_string(k) + ",0");
}

TEST_F(Cli, AcfDirectPathMatchesLibrary) {
  const std::string body = R"({"g": 3, "gamma": [[0.1, 0.8, 0.1], [0.1, 0.1, 0.8], [0.8, 0.1, 0.1]],
    "pi1": [0.2, 0.3, 0.5], "shapes": [1, 2, 6], "theta": 0.4, "grid": [0, 1], "exposures": [1]})";
  const Result r = run("--config " + config("rot.json", body) + " acf --max-lag 8");
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  EXPECT_EQ(l[0], "# path=direct");
  const auto spec = coxclaims::parse_config(body).model;
  for (int k = 1; k <= 8; ++k)
    EXPECT_NEAR(std::stod(l[k + 1].substr(l[k + 1].find(',') + 1)), coxclaims::acf_direct(spec, k), 1e-10);
}

TEST_F(Cli, ExitCodes) {
  const std::string bad = config("bad.json", R"({"g": 2, "pi1": [0.5, 0.5]})");
  EXPECT_EQ(run("--config " + bad + " acf").code, 2);
  const std::string uneven = config("uneven.json", R"({"g": 2, "gamma": [[0.9, 0.1], [0.2, 0.8]],
    "pi1": [0.5, 0.5], "shapes": [1, 3], "theta": 0.5, "grid": [0, 1, 2], "exposures": [1, 2]})");
  EXPECT_EQ(run("--config " + uneven + " acf").code, 3);
  EXPECT_EQ(run("--config " + reference() + " dist --which everything").code, 2);
  EXPECT_EQ(run("--config " + reference()).code, 2);
}

TEST_F(Cli, VerifyPasses) {
  const Result r = run("--config " + reference(R"(, "seed": 8)") + " verify");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("fail"), std::string::npos) << r.out;
}
