#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mgarch/io.hpp"
#include "support.hpp"

namespace mgarch {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out, err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(MGARCH_TEST_TMP) / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  CliRun run(const std::string& args) const {
    const std::string out = path("stdout.txt"), err = path("stderr.txt");
    const std::string cmd = std::string("\"") + MGARCH_CLI_PATH + "\" " + args + " > \"" + out + "\" 2> \"" + err + "\"";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  void write_scalar_spec(const std::string& name, double c, double a, double b) const {
    write(name, io::spec_to_json(GarchSpec::scalar(c, a, b)).dump());
  }

  fs::path dir_;
};

TEST_F(Cli, SimulateWritesDeterministicCsv) {
  write_scalar_spec("p.json", 0.1, 0.1, 0.8);
  const CliRun r1 = run("simulate --params " + path("p.json") + " --n 1000 --seed 7 --out " + path("y1.csv"));
  ASSERT_EQ(r1.code, 0) << r1.err;
  const CliRun r2 = run("simulate --params " + path("p.json") + " --n 1000 --seed 7 --out " + path("y2.csv"));
  ASSERT_EQ(r2.code, 0);
  const Matrix y = io::read_returns_csv(path("y1.csv"));
  EXPECT_EQ(y.rows(), 1000);
  EXPECT_EQ(y.cols(), 1);
  EXPECT_EQ(slurp(path("y1.csv")), slurp(path("y2.csv")));
  const io::json echo = io::json::parse(r1.out);
  EXPECT_EQ(echo["seed"], 7);
  EXPECT_EQ(echo["n"], 1000);
  EXPECT_EQ(echo["rng_version"], 1);
  // the CLI path and the library agree bit for bit
  SimulateOptions so;
  so.keep_h_path = false;
  EXPECT_EQ(simulate(GarchSpec::scalar(0.1, 0.1, 0.8), 1000, 7, so).y, y);
}

TEST_F(Cli, SimulateErrors) {
  write_scalar_spec("p.json", 0.1, 0.1, 0.8);
  const CliRun zero = run("simulate --params " + path("p.json") + " --n 0 --out " + path("y.csv"));
  EXPECT_EQ(zero.code, 1);
  EXPECT_NE(zero.err.find("n must be positive"), std::string::npos);

  write("bad.json", "{\"d\": 1, \"c\": [0.1");
  EXPECT_EQ(run("simulate --params " + path("bad.json") + " --n 10").code, 1);
  EXPECT_EQ(run("simulate --n 10").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);

  write_scalar_spec("neg.json", 1.0, -0.5, 0.0);
  const CliRun pv = run("simulate --params " + path("neg.json") + " --n 100000 --seed 8 --out " + path("y.csv"));
  EXPECT_EQ(pv.code, 2);
  EXPECT_NE(pv.err.find("step"), std::string::npos);
}

TEST_F(Cli, EstimateRecoversParameters) {
  // light tails: heavier specs can put the sample gammas outside the invertible region
  GarchSpec s = GarchSpec::scalar(0.2, 0.1, 0.6);
  write("p.json", io::spec_to_json(s).dump());
  ASSERT_EQ(run("simulate --params " + path("p.json") + " --n 200000 --seed 3 --out " + path("y.csv")).code, 0);
  const CliRun r = run("estimate --data " + path("y.csv") + " --with-se --out " + path("rep.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const io::json rep = io::read_json_file(path("rep.json"));
  const GarchSpec est = io::spec_from_json(rep["spec"]);
  EXPECT_NEAR(est.c(0), 0.2, 0.1);
  EXPECT_NEAR(est.A(0, 0), 0.1, 0.1);
  EXPECT_NEAR(est.B(0, 0), 0.6, 0.1);
  EXPECT_TRUE(rep.contains("asymptotics"));
  EXPECT_GT(rep["asymptotics"]["std_errors"]["B[0][0]"].get<double>(), 0.0);
  EXPECT_EQ(rep["asymptotics"]["bandwidth"], 21);
}

TEST_F(Cli, EstimateShapesForTwoColumns) {
  std::mt19937_64 rng(101);
  const GarchSpec s = testing::random_spec(rng, 2);
  write("p.json", io::spec_to_json(s).dump());
  ASSERT_EQ(run("simulate --params " + path("p.json") + " --n 20000 --seed 4 --out " + path("y.csv")).code, 0);
  const CliRun r = run("estimate --data " + path("y.csv") + " --out " + path("rep.json"));
  ASSERT_TRUE(r.code == 0 || r.code == 3 || r.code == 4) << r.err;
  if (r.code == 0) {
    const io::json rep = io::read_json_file(path("rep.json"));
    EXPECT_EQ(rep["spec"]["d"], 2);
    EXPECT_EQ(rep["spec"]["A"].size(), 3u);
    EXPECT_EQ(rep["sigma"].size(), 3u);
    EXPECT_EQ(rep["p_eigenvalues"].size(), 6u);
  }
}

TEST_F(Cli, EstimateFromMomentsAndPhiMethods) {
  std::mt19937_64 rng(102);
  const GarchSpec s = testing::random_spec(rng, 2);
  const Matrix sigma = testing::random_spd(rng, 3);
  write("m.json", io::moments_to_json(population_moments(s, sigma)).dump());
  const CliRun r = run("estimate --data " + path("m.json") + " --out -");
  ASSERT_EQ(r.code, 0) << r.err;
  const GarchSpec est = io::spec_from_json(io::json::parse(r.out)["spec"]);
  EXPECT_LE((est.B - s.B).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((est.A - s.A).cwiseAbs().maxCoeff(), 1e-8);

  // lstsq with three lags needs data: compare against lag1 on a long simulated path
  write("p.json", io::spec_to_json(s).dump());
  ASSERT_EQ(run("simulate --params " + path("p.json") + " --n 50000 --seed 5 --out " + path("y.csv")).code, 0);
  const CliRun ls = run("estimate --data " + path("y.csv") + " --phi-method lstsq --lags 3 --out " + path("ls.json"));
  EXPECT_TRUE(ls.code == 0 || ls.code == 3 || ls.code == 4) << ls.err;
  EXPECT_EQ(run("estimate --data " + path("y.csv") + " --phi-method ols").code, 1);
  EXPECT_EQ(run("estimate --data " + path("m.json") + " --with-se").code, 1);
}

TEST_F(Cli, EstimateExitCodes) {
  // phi = 0.5, Gamma0 = 2, Gamma1 = -1: double root on the unit circle
  write("uni.json", R"({"h": [1.0], "M0": [[1.3333333333333333]], "M1": [[-0.3333333333333333]],
                        "M2": [[-0.16666666666666666]]})");
  const CliRun uni = run("estimate --data " + path("uni.json"));
  EXPECT_EQ(uni.code, 4);
  EXPECT_NE(uni.err.find("UnimodularEigenvalues"), std::string::npos);

  write("sing.json", R"({"h": [1.0], "M0": [[1.0]], "M1": [[0.0]], "M2": [[0.0]]})");
  EXPECT_EQ(run("estimate --data " + path("sing.json")).code, 3);

  write("y.csv", "y1,y2\n1,2\n");
  EXPECT_EQ(run("estimate --data " + path("y.csv")).code, 1);
  EXPECT_EQ(run("estimate --data " + path("missing.csv")).code, 1);
}

TEST_F(Cli, Aggregate) {
  write_scalar_spec("p.json", 0.1, 0.1, 0.8);
  write("sigma.json", "[[1.0]]");
  write("sw.json", R"({"sigma_w": [[0.0]]})");

  const CliRun id = run("aggregate --params " + path("p.json") + " --sigma " + path("sigma.json") + " --m 1 --out -");
  ASSERT_EQ(id.code, 0) << id.err;
  const io::json j = io::json::parse(id.out);
  EXPECT_NEAR(j["B"][0][0].get<double>(), 0.8, 1e-10);
  EXPECT_NEAR(j["A"][0][0].get<double>(), 0.1, 1e-10);
  EXPECT_NEAR(j["c"][0].get<double>(), 0.1, 1e-10);
  EXPECT_EQ(j["m"], 1);
  EXPECT_EQ(j["kind"], "stock");

  const CliRun two = run("aggregate --params " + path("p.json") + " --sigma " + path("sigma.json") +
                      " --m 2 --kind stock --out " + path("agg.json"));
  ASSERT_EQ(two.code, 0);
  const io::json a = io::read_json_file(path("agg.json"));
  EXPECT_NEAR(a["B"][0][0].get<double>(), testing::scalar_stable_root(1.5284, -0.72), 1e-10);

  EXPECT_EQ(run("aggregate --params " + path("p.json") + " --sigma " + path("sigma.json") + " --m 2 --kind flow").code,
            1);
  EXPECT_EQ(run("aggregate --params " + path("p.json") + " --sigma " + path("sigma.json") + " --m 2 --kind flow" +
                " --sigma-w " + path("sw.json") + " --out -")
                .code,
            0);
  EXPECT_EQ(run("aggregate --params " + path("p.json") + " --sigma " + path("sigma.json") + " --m 2 --kind sum").code,
            1);
}

TEST_F(Cli, MonteCarlo) {
  write_scalar_spec("p.json", 0.1, 0.1, 0.8);
  const CliRun r = run("montecarlo --params " + path("p.json") + " --n 5000 --reps 2 --seed 1 --out " + path("mc.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("mc.csv"));
  std::string line;
  int data = 0, summary = 0;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("rep,n,seed,status,max_abs_error", 0), 0u);
  while (std::getline(in, line)) {
    if (line.rfind("# summary", 0) == 0) {
      ++summary;
    } else if (!line.empty()) {
      ++data;
    }
  }
  EXPECT_EQ(data, 2);
  EXPECT_EQ(summary, 1);

  const CliRun again = run("montecarlo --params " + path("p.json") + " --n 5000 --reps 2 --seed 1 --out " + path("mc2.csv"));
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(slurp(path("mc.csv")), slurp(path("mc2.csv")));

  write_scalar_spec("ns.json", 0.1, 0.3, 0.8);
  const CliRun bad = run("montecarlo --params " + path("ns.json") + " --n 1000,2000 --reps 2 --out -");
  EXPECT_EQ(bad.code, 0);
  EXPECT_NE(bad.out.find("NonStationary"), std::string::npos);
  EXPECT_NE(bad.out.find("failure_rate=1"), std::string::npos);
}

}  // namespace
}  // namespace mgarch
