#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

// End-to-end checks against the installed binary. The test runner passes the
// binary and data directory through IVPI_BIN and IVPI_DATA.

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string env_or_fail(const char* name) {
  const char* v = std::getenv(name);
  REQUIRE_MESSAGE(v != nullptr, name << " must be set by the test harness");
  return v;
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("ivpi_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  static const std::string bin = env_or_fail("IVPI_BIN");
  static int counter = 0;
  const fs::path out = scratch_dir() / ("out_" + std::to_string(counter) + ".txt");
  const fs::path err = scratch_dir() / ("err_" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd =
      "'" + bin + "' " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

fs::path write_scratch(const std::string& name, const std::string& content) {
  const fs::path p = scratch_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << content;
  return p;
}

std::string data_file(const std::string& name) {
  return (fs::path(env_or_fail("IVPI_DATA")) / name).string();
}

std::string quoted(const std::string& path) { return "'" + path + "'"; }

// A well-formed law that fails the instrumental inequalities for x=1.
const char* kViolatingLaw = R"({"law": [
  {"z": 0, "x": 0, "y": 0, "p": 0.3}, {"z": 0, "x": 0, "y": 1, "p": 0.0},
  {"z": 0, "x": 1, "y": 0, "p": 0.7}, {"z": 0, "x": 1, "y": 1, "p": 0.0},
  {"z": 1, "x": 0, "y": 0, "p": 0.3}, {"z": 1, "x": 0, "y": 1, "p": 0.0},
  {"z": 1, "x": 1, "y": 0, "p": 0.0}, {"z": 1, "x": 1, "y": 1, "p": 0.7}
]})";

}  // namespace

TEST_CASE("help exits cleanly, bad usage does not") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("bounds --help").exit_code == 0);
  CHECK(run_cli("frobnicate x.json").exit_code == 1);
  CHECK(run_cli("bounds").exit_code == 1);  // missing input
  CHECK(run_cli("check no_such_file.json").exit_code == 1);
}

TEST_CASE("check accepts the trial data and rejects a falsified law") {
  const RunResult ok = run_cli("check " + quoted(data_file("flu_trial.json")));
  CHECK(ok.exit_code == 0);
  const json report = json::parse(ok.out);
  CHECK(report["validation"]["ok"] == true);
  CHECK(report["instrumental_inequalities"]["ok"] == true);

  const fs::path bad = write_scratch("violating_law.json", kViolatingLaw);
  const RunResult rejected = run_cli("check " + quoted(bad.string()));
  CHECK(rejected.exit_code == 2);
  CHECK(json::parse(rejected.out)["instrumental_inequalities"]["ok"] == false);
}

TEST_CASE("estimate reports the published Wald estimate") {
  const RunResult r = run_cli("estimate " + quoted(data_file("flu_trial.json")));
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["iv"]["wald"]["display"] == "-0.12");
  CHECK(report["iv"]["weak_instrument"] == false);
  CHECK(report["tool"]["name"] == "ivpi");
}

TEST_CASE("bounds reproduces the published intervals at two decimals") {
  const std::string flu = quoted(data_file("flu_trial.json"));

  const RunResult free = run_cli("bounds " + flu);
  REQUIRE(free.exit_code == 0);
  json b = json::parse(free.out)["bounds"][0]["result"];
  CHECK(b["status"] == "bounded");
  CHECK(b["lower"]["display"] == "-0.24");
  CHECK(b["upper"]["display"] == "0.64");

  const RunResult capped =
      run_cli("bounds " + flu + " --monotonicity --cap-nt 0.1 --cap-at 0.1");
  REQUIRE(capped.exit_code == 0);
  b = json::parse(capped.out)["bounds"][0]["result"];
  CHECK(b["lower"]["display"] == "-0.07");
  CHECK(b["upper"]["display"] == "0.02");

  const RunResult tighter =
      run_cli("bounds " + flu + " --monotonicity --cap-nt 0.05 --cap-at 0.1");
  REQUIRE(tighter.exit_code == 0);
  b = json::parse(tighter.out)["bounds"][0]["result"];
  CHECK(b["lower"]["display"] == "-0.07");
  CHECK(b["upper"]["display"] == "-0.02");
}

TEST_CASE("IVPI_PRECISION widens the display") {
  // The env var has to precede the binary, so build this command by hand.
  const std::string bin = env_or_fail("IVPI_BIN");
  const fs::path out = scratch_dir() / "precision_out.txt";
  const std::string cmd = "IVPI_PRECISION=4 '" + bin + "' estimate '" +
                          data_file("flu_trial.json") + "' > '" + out.string() + "'";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const json report = json::parse(slurp(out));
  CHECK(report["iv"]["wald"]["display"] == "-0.1220");
}

TEST_CASE("sweep emits a TSV table on stdout") {
  const RunResult r = run_cli("bounds " + quoted(data_file("flu_trial.json")) +
                              " --monotonicity --cap-at 0.1 --sweep-nt 0.05:0.10:0.05");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "#epsilon\tlower\tupper");
  int rows = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);

  const RunResult bad = run_cli("bounds " + quoted(data_file("flu_trial.json")) +
                                " --sweep-nt 0.5:0.1:0.05");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("sensitivity contract") {
  const std::string flu = quoted(data_file("flu_trial.json"));
  const RunResult r = run_cli("sensitivity " + flu + " --at-range -1,1 --nt-range -1,1");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["sensitivity"]["lower"].get<double>() < report["sensitivity"]["upper"].get<double>());

  CHECK(run_cli("sensitivity " + flu + " --at-range -1,1").exit_code == 1);  // missing flag
  CHECK(run_cli("sensitivity " + flu + " --at-range -2,0.5 --nt-range -1,1").exit_code == 1);
  CHECK(run_cli("sensitivity " + flu + " --at-range junk --nt-range -1,1").exit_code == 1);

  // Weak instrument: a model-level finding, not a usage error.
  const fs::path weak = write_scratch("weak_law.json", R"({"law": [
    {"z": 0, "x": 0, "y": 0, "p": 0.4}, {"z": 0, "x": 0, "y": 1, "p": 0.1},
    {"z": 0, "x": 1, "y": 0, "p": 0.3}, {"z": 0, "x": 1, "y": 1, "p": 0.2},
    {"z": 1, "x": 0, "y": 0, "p": 0.4}, {"z": 1, "x": 0, "y": 1, "p": 0.1},
    {"z": 1, "x": 1, "y": 0, "p": 0.3}, {"z": 1, "x": 1, "y": 1, "p": 0.2}
  ]})");
  CHECK(run_cli("sensitivity " + quoted(weak.string()) + " --at-range -1,1 --nt-range -1,1")
            .exit_code == 2);
}

TEST_CASE("unit records aggregate like counts") {
  const fs::path csv = write_scratch("units.csv",
                                     "z,x,y\n"
                                     "0,0,0\n0,0,0\n0,1,1\n0,0,1\n"
                                     "1,1,1\n1,1,0\n1,0,0\n1,1,1\n");
  const RunResult r = run_cli("estimate " + quoted(csv.string()));
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["input"]["kind"] == "units");
  CHECK(report["input"]["counts"].size() == 8);

  const fs::path bad = write_scratch("units_bad.csv", "z,x,y\n0,0,0\n0,2,0\n");
  CHECK(run_cli("estimate " + quoted(bad.string())).exit_code == 1);
}

TEST_CASE("truncated and malformed inputs exit 1") {
  const fs::path truncated = write_scratch("truncated.json", R"({"cells": [)");
  CHECK(run_cli("check " + quoted(truncated.string())).exit_code == 1);
  const fs::path wrong = write_scratch("wrong.json", R"({"neither": 1})");
  CHECK(run_cli("bounds " + quoted(wrong.string())).exit_code == 1);
  const fs::path empty = write_scratch("empty.json", "");
  CHECK(run_cli("estimate " + quoted(empty.string())).exit_code == 1);
}

TEST_CASE("simulate exact output pipes back into the analysis commands") {
  const RunResult sim = run_cli("simulate " + quoted(data_file("two_physician.json")));
  REQUIRE(sim.exit_code == 0);
  const json report = json::parse(sim.out);
  CHECK(report["report"]["defier_share"]["value"].get<double>() == doctest::Approx(0.10));
  CHECK(report.contains("law"));

  const fs::path law = write_scratch("simulated_law.json", sim.out);
  const RunResult bounds = run_cli("bounds " + quoted(law.string()));
  CHECK(bounds.exit_code == 0);
  CHECK(json::parse(bounds.out)["input"]["kind"] == "law");
}

TEST_CASE("simulate proxy scenario reports level weights") {
  const RunResult sim = run_cli("simulate " + quoted(data_file("proxy.json")));
  REQUIRE(sim.exit_code == 0);
  const json report = json::parse(sim.out);
  CHECK(report["report"].contains("level_weights"));
  CHECK(run_cli("simulate " + quoted(data_file("proxy.json")) + " --mode mc").exit_code == 1);
}

TEST_CASE("monte carlo mode is reproducible byte for byte") {
  const std::string args =
      "simulate " + quoted(data_file("two_physician.json")) + " --mode mc --seed 7 --n 5000";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  const RunResult c = run_cli("simulate " + quoted(data_file("two_physician.json")) +
                              " --mode mc --seed 8 --n 5000");
  CHECK(a.out != c.out);

  // Sampled counts feed straight back into estimate.
  const fs::path counts = write_scratch("mc_counts.json", a.out);
  const RunResult est = run_cli("estimate " + quoted(counts.string()));
  CHECK(est.exit_code == 0);
  CHECK(json::parse(est.out)["input"]["kind"] == "counts");
}
