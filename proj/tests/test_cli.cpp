#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

struct CliRun {
  int code = -1;
  std::string out, err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun hermcheck(const std::string& args) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() / ("hermcheck_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto out = dir / ("out" + std::to_string(counter));
  const auto err = dir / ("err" + std::to_string(counter++));
  const std::string cmd = std::string("\"") + HERMCHECK_PATH + "\" " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string fixture(const std::string& name) { return std::string(HERM_SOURCE_DIR) + "/tests/fixtures/" + name; }

}  // namespace

TEST(Cli, CatalogList) {
  const CliRun r = hermcheck("catalog list");
  EXPECT_EQ(r.code, 0);
  for (const auto& name : {"flat_torus", "fubini_study_1", "fubini_study_2", "complex_hyperbolic_1", "hopf", "su2xr", "iwasawa"})
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
}

TEST(Cli, VerifyWholeCatalog) {
  for (const auto& name : {"flat_torus", "fubini_study_1", "fubini_study_2", "complex_hyperbolic_1", "hopf", "su2xr", "iwasawa"}) {
    const CliRun r = hermcheck(std::string("verify catalog:") + name);
    EXPECT_EQ(r.code, 0) << name << "\n" << r.out << r.err;
  }
}

TEST(Cli, VerifyHopfJson) {
  const CliRun r = hermcheck("verify catalog:hopf --points 10 --seed 7 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["manifold"], "hopf");
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["points"].size(), 10u);
  for (const auto& c : j["checks"]) {
    if (c["id"] == "thm2_eq11" || c["id"] == "thm2_eq13" || c["id"] == "eq23" || c["id"] == "lemma7_eq26")
      EXPECT_EQ(c["status"], "pass") << c["id"];
  }
  // same seed, same bytes
  EXPECT_EQ(hermcheck("verify catalog:hopf --points 10 --seed 7 --format json").out, r.out);
}

TEST(Cli, VerifySingleCheck) {
  const CliRun r = hermcheck("verify catalog:hopf --check lemma8 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["checks"].size(), 1u);
  EXPECT_EQ(hermcheck("verify catalog:hopf --check nonsense").code, 2);
}

TEST(Cli, ClassifyIwasawa) {
  const CliRun r = hermcheck("classify catalog:iwasawa --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string out = r.out;
  const auto j = nlohmann::json::parse(out);
  const auto flags = j["points"][0]["flags"];
  EXPECT_EQ(flags["balanced"], true);
  EXPECT_EQ(flags["pluriclosed"], false);
}

TEST(Cli, CurvatureAtPoint) {
  const CliRun r = hermcheck("curvature catalog:hopf --at \"(1, 0)\" --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("c_estimate"));
  const CliRun coord = hermcheck("curvature catalog:fubini_study_1 --at \"(0.5-0.25i)\" --frame coordinate");
  EXPECT_EQ(coord.code, 0) << coord.err;
  const CliRun bad = hermcheck("curvature catalog:hopf --at \"(0, 0)\"");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("error:"), std::string::npos);
}

TEST(Cli, UnknownCatalogEntry) {
  const CliRun r = hermcheck("verify catalog:bad --points 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown catalog entry"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(hermcheck("").code, 2);
  EXPECT_EQ(hermcheck("frobnicate").code, 2);
  const CliRun r = hermcheck("verify catalog:hopf --bogus");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--bogus"), std::string::npos);
  EXPECT_EQ(hermcheck("verify catalog:hopf --format xml").code, 2);
}

TEST(Cli, CorruptedInputsAreLocated) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"nonhermitian.json", "/metric: entries (1,2)/(2,1)"},
      {"nonhermitian_h.json", "/h/"},
      {"jacobi_violation.json", "/C: Jacobi identity violated"},
      {"bad_syntax.json", "/metric/0/0:"},
      {"missing_field.json", "/metric: missing required field"},
      {"truncated.json", "invalid JSON"},
      {"not_positive.json", "/sample_points/0:"},
  };
  for (const auto& [file, needle] : cases) {
    const CliRun r = hermcheck("verify " + fixture(file));
    EXPECT_EQ(r.code, 2) << file;
    EXPECT_NE(r.err.find(needle), std::string::npos) << file << ": " << r.err;
  }
}

TEST(Cli, ViolationsExitOne) {
  const CliRun r = hermcheck("verify " + fixture("wrong_expectation.json"));
  EXPECT_EQ(r.code, 1) << r.out << r.err;
}

TEST(Cli, SearchRuns) {
  const std::string fam = std::string(HERM_SOURCE_DIR) + "/data/families/su2xr_lie_metric.json";
  const CliRun r = hermcheck("search " + fam + " --iters 40 --seed 2 --format json --findings-dir \"\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["best_defect"].get<double>(), 0.1);
  EXPECT_EQ(j["finding"], false);
  EXPECT_EQ(hermcheck("search " + fixture("missing_field.json")).code, 2);
}
