#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("pdm_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const auto err_path = scratch() / "stderr.txt";
  const std::string cmd = std::string(PDM_SPECTRA_EXE) + " " + args + " 2>" + err_path.string();
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Cli, SolveInverseSquareSingleRow) {
  const auto r = run("solve --case inverse-square --a 1 --V1 0.01 --V2 0.01 --V3 0 --lambda 1 --B 2 --Phi 2 --n 1 --m 0");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("E,n,m,residual,method,bracket_lo,bracket_hi,iterations\n", 0), 0u);
  EXPECT_EQ(count_lines(r.out), 2);
  EXPECT_NE(r.out.find("0.41215160168497"), std::string::npos);
}

TEST(Cli, SolveIsDeterministic) {
  const std::string args = "solve --case exponential --a 0.1 --V1 0.5 --V2 0.5 --V3 0.5 --lambda 0.1 --B 1 --Phi 1 --n 1";
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("2.06001253856"), std::string::npos);
}

TEST(Cli, MissingCaseIsUsageError) {
  const auto r = run("solve --n 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--case"), std::string::npos);
}

TEST(Cli, UnknownOptionAndBadFigureId) {
  EXPECT_EQ(run("solve --case exponential --frobnicate 3").code, 2);
  EXPECT_EQ(run("figure --id 13").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, MalformedConfigIsUsageError) {
  const auto p = scratch() / "bad.json";
  std::ofstream(p) << R"({"mass": {"case": "exponential", "b": 1}})";
  const auto r = run("solve --config " + p.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown key"), std::string::npos);
}

TEST(Cli, DomainErrorExitsThreeWithJson) {
  const auto r = run("solve --case inverse-square --a 1 --V1 0 --V2 0 --V3 0 --B 0 --Phi 0");
  EXPECT_EQ(r.code, 3);
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j["error"], "degenerate-parameter");
  EXPECT_TRUE(j.contains("message"));
}

TEST(Cli, ConfigFileAndFlagOverride) {
  const auto p = scratch() / "inv.json";
  std::ofstream(p) << R"({"mass": {"case": "inverse-square", "a": 1},
    "potential": {"V1": 0.01, "V2": 0.01, "V3": 0, "lambda": 1},
    "fields": {"B": 2, "Phi_AB": 2}, "quantum": {"n": 1, "m": 0}})";
  const auto a = run("solve --config " + p.string());
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("0.41215160168497"), std::string::npos);
  const auto b = run("solve --config " + p.string() + " --a 2");
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(a.out, b.out);
}

TEST(Cli, SweepWritesFileAtomically) {
  const auto out = scratch() / "sweep.csv";
  const auto r = run("sweep --case exponential --vary a --lo 0.1 --hi 2 --steps 5 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto text = slurp(out);
  EXPECT_EQ(text.rfind("x,E,n,m,B,Phi,a,lambda,V1,V2,V3,status\n", 0), 0u);
  EXPECT_EQ(count_lines(text), 6);
}

TEST(Cli, ThermoTable) {
  const auto r = run("thermo --T-lo 1 --T-hi 5 --steps 5");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("T,beta,theta,Z_integral,Z_sum,gap,U,F,S,Cv,validity_flag\n", 0), 0u);
  EXPECT_EQ(count_lines(r.out), 6);
}

TEST(Cli, FigureWritesCurvesAndVerdicts) {
  const auto dir = scratch() / "fig1";
  fs::create_directories(dir);
  const auto r = run("figure --id 1 --points 8 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(dir / "fig01_verdicts.json"));
  EXPECT_EQ(j["figure"], 1);
  for (const auto& c : j["curves"]) {
    const auto text = slurp(dir / c.get<std::string>());
    EXPECT_EQ(count_lines(text), 9) << c;
  }
  for (const auto& e : fs::directory_iterator(dir)) {
    EXPECT_EQ(e.path().filename().string().find(".tmp"), std::string::npos);
  }
}

TEST(Cli, OracleComparison) {
  const auto r = run("oracle --case exponential --a 0.1 --which derived-condition --max-states 2");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("index,n_formula,E_oracle,E_formula,abs_gap,rel_gap,oracle_nodes\n", 0), 0u);
  EXPECT_EQ(count_lines(r.out), 3);
}

TEST(Cli, WavefunctionExport) {
  const auto wf = scratch() / "wf.csv";
  const auto r = run("solve --case exponential --a 0.1 --wavefunction " + wf.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(wf);
  EXPECT_EQ(text.rfind("rho,R\n", 0), 0u);
  EXPECT_GT(count_lines(text), 100);
}
