#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* cli_path() {
  const char* p = std::getenv("PSEUDOMODE_CLI");
  return p ? p : "pseudomode_cli";
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pseudomode_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& body) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }

  // Runs the CLI with the given arguments and returns its exit status; stdout goes to out.txt.
  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + " " + cli_path() + " " + args + " > " + (dir_ / "out.txt").string() + " 2> " +
                            (dir_ / "err.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string sweep_config(const std::string& out_dir) const {
    return R"({"potential": {"name": "poly_like", "params": {"gamma": 2}}, "regime": "real_axis", "n": 2,
              "path": {"lo": 100, "hi": 10000, "count": 4}, "cutoff": {"eps1": 1.6}, )"
           R"("output": {"dir": ")" + (dir_ / out_dir).string() + R"("}})";
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RunWritesReportsAndFit) {
  const fs::path cfg = write_config("sweep.json", sweep_config("out"));
  ASSERT_EQ(run("run " + cfg.string()), 0) << read(dir_ / "err.txt");
  const std::string csv = read(dir_ / "out" / "reports.csv");
  EXPECT_EQ(csv.rfind("lambda_re,lambda_im,ratio,kappa,sigma,extra,f_norm,delta_minus,delta_plus", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const std::string fit = read(dir_ / "out" / "fit.json");
  EXPECT_NE(fit.find("\"schema_version\""), std::string::npos);
  EXPECT_NE(fit.find("\"slope\""), std::string::npos);
  EXPECT_NE(fit.find("\"bounds\""), std::string::npos);
}

TEST_F(CliTest, RunIsDeterministicAcrossWorkerCounts) {
  const fs::path a = write_config("a.json", sweep_config("a"));
  const fs::path b = write_config("b.json", sweep_config("b"));
  ASSERT_EQ(run("--workers 1 run " + a.string()), 0);
  ASSERT_EQ(run("run " + b.string(), "PSEUDOMODE_WORKERS=3"), 0);
  const std::string first = read(dir_ / "a" / "reports.csv");
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, read(dir_ / "b" / "reports.csv"));
}

TEST_F(CliTest, OracleColumns) {
  const std::string body =
      R"({"potential": {"name": "monomial_imag", "params": {"gamma": 1}}, "regime": "real_axis", "n": 2,
          "path": {"values": [100, 300, 1000, 10000]}, "oracle": {"enabled": true, "max_size": 200000},
          "output": {"dir": ")" +
      (dir_ / "o").string() + R"("}})";
  const fs::path cfg = write_config("oracle.json", body);
  ASSERT_EQ(run("run " + cfg.string()), 0) << read(dir_ / "err.txt");
  const std::string csv = read(dir_ / "o" / "reports.csv");
  EXPECT_NE(csv.find("oracle_ratio"), std::string::npos);
  EXPECT_NE(csv.find("floor_limited"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsExitWithTwo) {
  const std::vector<std::pair<std::string, std::string>> bad = {
      {"empty_values", R"({"potential": {"name": "monomial_imag"}, "regime": "real_axis", "path": {"values": []}})"},
      {"unknown_key", R"({"potential": {"name": "monomial_imag"}, "regime": "real_axis", "path": {}, "speed": 1})"},
      {"wrong_type", R"({"potential": {"name": "monomial_imag"}, "regime": "real_axis", "path": {"lo": "big"}})"},
      {"bad_potential", R"({"potential": {"name": "quartic"}, "regime": "real_axis", "path": {}})"},
      {"bad_mode", R"({"potential": {"name": "monomial_imag"}, "regime": "real_axis", "mode": "ignore_w", "path": {}})"},
      {"malformed", R"({"potential": )"},
  };
  for (const auto& [name, body] : bad) {
    const fs::path cfg = write_config(name + ".json", body);
    EXPECT_EQ(run("run " + cfg.string()), 2) << name;
  }
  EXPECT_EQ(run("run " + (dir_ / "missing.json").string()), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(CliTest, NumericalErrorsExitWithThree) {
  // At lambda = 0.5 the transition width exceeds the half-width.
  const std::string body = R"({"potential": {"name": "monomial_imag", "params": {"gamma": 1}}, "regime": "real_axis",
                               "path": {"values": [0.5, 1, 2, 4]}, "output": {"dir": ")" +
                           (dir_ / "n").string() + R"("}})";
  const fs::path cfg = write_config("numeric.json", body);
  EXPECT_EQ(run("run " + cfg.string()), 3);
  EXPECT_NE(read(dir_ / "err.txt").find("numerical error"), std::string::npos);
}

TEST_F(CliTest, VerifyAndDump) {
  EXPECT_EQ(run("verify symbolic"), 0);
  EXPECT_NE(read(dir_ / "out.txt").find("PASS  1"), std::string::npos);
  EXPECT_EQ(run("verify nonsense"), 2);
  EXPECT_EQ(run("dump-terms --n 1"), 0);
  EXPECT_FALSE(read(dir_ / "out.txt").empty());
  EXPECT_EQ(run("dump-terms --n -1"), 2);
}
