#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "qcurv/cli.hpp"

using nlohmann::json;

namespace {
struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = qcurv::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void all_finite(const json& j) {
  if (j.is_number()) CHECK(std::isfinite(j.get<double>()));
  if (j.is_structured())
    for (const auto& v : j) all_finite(v);
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qcurv_test_" + name);
}
}  // namespace

TEST_CASE("exit codes") {
  CHECK(invoke({"ctx", "--n", "4"}).code == 0);
  CHECK(invoke({"ctx", "--n", "5"}).code == 2);
  CHECK(invoke({"ctx", "--n", "2"}).code == 2);
  CHECK(invoke({"no-such-command"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"alpha", "--profile", "nonsense"}).code == 2);
  CHECK(invoke({"alpha", "--format", "xml"}).code == 2);
  CHECK(invoke({"alpha", "--config", scratch("missing.toml").string()}).code == 2);
}

TEST_CASE("json reports") {
  const auto ctx = json::parse(invoke({"ctx", "--n", "6"}).out);
  CHECK(ctx["schema"] == 1);
  CHECK(ctx["command"] == "ctx");
  CHECK(ctx["m"] == 3);

  const auto r = invoke({"alpha", "--profile", "sphere:0.5"});
  REQUIRE(r.code == 0);
  const auto alpha = json::parse(r.out);
  CHECK(std::abs(alpha["alpha"].get<double>() - 0.5) < 1e-6);

  const auto defect = json::parse(invoke({"defect", "--profile", "counterexample"}).out);
  CHECK(std::abs(defect["alpha"].get<double>() - 2.0) < 1e-6);
  CHECK(defect["decay"]["verdict"] == "violates");
  CHECK(defect["completeness"]["verdict"] == "complete");
  CHECK(defect["low_confidence"] == true);

  for (const std::string cmd : {"ctx", "q-curvature", "alpha", "decay", "potential", "normality", "defect", "asymptotics"}) {
    CAPTURE(cmd);
    const auto o = invoke({cmd});
    REQUIRE(o.code == 0);
    all_finite(json::parse(o.out));
  }
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args{"defect", "--profile", "sphere:0.25", "--n", "6"};
  CHECK(invoke(args).out == invoke(args).out);
  const std::vector<std::string> csv{"decay", "--format", "csv"};
  CHECK(invoke(csv).out == invoke(csv).out);
}

TEST_CASE("csv output") {
  const auto o = invoke({"decay", "--format", "csv", "--grid", "2,4,8,16,32"});
  REQUIRE(o.code == 0);
  std::istringstream lines(o.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "r,epsilon");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("config file with flag override") {
  const auto path = scratch("config.toml");
  {
    std::ofstream f(path);
    f << "n = 6\nprofile = \"sphere:0.25\"\n\n[quadrature]\nrel_tol = 1e-10\n";
  }
  const auto from_file = json::parse(invoke({"alpha", "--config", path.string()}).out);
  CHECK(from_file["n"] == 6);
  CHECK(std::abs(from_file["alpha"].get<double>() - 0.25) < 1e-6);
  const auto overridden = json::parse(invoke({"alpha", "--config", path.string(), "--profile", "sphere:0.75"}).out);
  CHECK(overridden["n"] == 6);
  CHECK(std::abs(overridden["alpha"].get<double>() - 0.75) < 1e-6);
  {
    std::ofstream f(path);
    f << "bogus = 1\n";
  }
  CHECK(invoke({"alpha", "--config", path.string()}).code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("verify suites") {
  const auto o = invoke({"verify", "--suite", "constants"});
  CHECK(o.code == 0);
  const auto j = json::parse(o.out);
  CHECK(j["passed"] == true);
  CHECK(invoke({"verify", "--suite", "nope"}).code == 2);
}

TEST_CASE("standalone binary") {
  const auto path = scratch("binary.json");
  const std::string cmd = std::string("\"") + QCURV_TOOL_PATH + "\" alpha --profile sphere:0.5 > \"" + path.string() + "\"";
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::ifstream f(path);
  const auto j = json::parse(f);
  CHECK(std::abs(j["alpha"].get<double>() - 0.5) < 1e-6);
  std::filesystem::remove(path);
  const std::string bad = std::string("\"") + QCURV_TOOL_PATH + "\" ctx --n 5 > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
