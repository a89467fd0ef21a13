#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qcqpkit/io.hpp"
#include "qcqpkit/table1.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "qcqp_cli_test";
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd =
      std::string(QCQP_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qcqp_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("generate writes a valid instance and reports the conditions") {
  const fs::path out = temp_file("ring.json");
  const RunResult r = run_cli("generate disk-ring --r 0.5 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("pass") != std::string::npos);

  const qcqpkit::InstanceFile file = qcqpkit::parse_instance(slurp(out));
  CHECK(file.n == 3);
  CHECK(file.set.constraints.size() == 8);
  REQUIRE(file.set.alphas.has_value());
}

TEST_CASE("generate rejects out-of-range parameters") {
  const fs::path out = temp_file("bad.json");
  const RunResult r = run_cli("generate disk-ring --r 0.9 --out " + out.string());
  CHECK(r.exit_code == 2);
  CHECK(run_cli("generate no-such-family --out " + out.string()).exit_code == 2);
}

TEST_CASE("missing input files exit with the I/O code") {
  CHECK(run_cli("solve /nonexistent/path.json").exit_code == 3);
}

TEST_CASE("solve on the strip instances") {
  const fs::path strip = temp_file("strip.json");
  const fs::path single = temp_file("strip_single.json");
  REQUIRE(run_cli("generate strip --out " + strip.string()).exit_code == 0);
  REQUIRE(run_cli("generate strip-single --out " + single.string()).exit_code == 0);

  // The embedded concave objective makes the two-zone form diverge.
  CHECK(run_cli("solve " + strip.string()).exit_code == 4);

  const RunResult good = run_cli("solve " + single.string());
  CHECK(good.exit_code == 0);
  CHECK(good.out.find("-4") != std::string::npos);

  // Zero objective: exit 0 and a feasible recovered point.
  const RunResult zero = run_cli("solve " + single.string() + " --objective 0,0,0,0,0,0 --json");
  REQUIRE(zero.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(zero.out);
  CHECK(j["status"] == "optimal");
  CHECK(std::abs(j["objective"].get<double>()) <= 1e-6);
  REQUIRE(j["extraction"].is_object());
}

TEST_CASE("verify subcommand exit codes") {
  const fs::path ring = temp_file("ring_verify.json");
  REQUIRE(run_cli("generate disk-ring --r 0.5 --out " + ring.string()).exit_code == 0);
  CHECK(run_cli("verify " + ring.string() + " --samples 20000").exit_code == 0);
  CHECK(run_cli("verify " + ring.string() + " --condition Dprime").exit_code == 0);

  // A deliberately broken pair fails condition D with a witness.
  qcqpkit::InstanceFile bad;
  bad.n = 3;
  bad.H = qcqpkit::last_axis_homogenizer(3);
  bad.set.constraints.push_back({qcqpkit::SymMatrix::diag({1, -2, 0}), "A"});
  bad.set.constraints.push_back({qcqpkit::SymMatrix::diag({-2, 1, 0}), "B"});
  const fs::path bad_path = temp_file("bad_pair.json");
  std::ofstream(bad_path) << qcqpkit::serialize_instance(bad);
  const RunResult r = run_cli("verify " + bad_path.string() + " --condition D");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("lift with mismatched cardinalities points at dummy_pad") {
  const fs::path ring = temp_file("ring_for_lift.json");
  const fs::path single = temp_file("single_for_lift.json");
  REQUIRE(run_cli("generate disk-ring --r 0.5 --out " + ring.string()).exit_code == 0);
  REQUIRE(run_cli("generate strip-single --out " + single.string()).exit_code == 0);
  const RunResult r =
      run_cli("generate lift --a " + ring.string() + " --b " + single.string() + " --out /tmp/x.json");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("dummy_pad") != std::string::npos);

  // Padding the smaller family first makes the same call succeed.
  const fs::path lifted = temp_file("lifted.json");
  const RunResult ok = run_cli("generate lift --a " + ring.string() + " --b " + single.string() +
                               " --pad 7 --lambda 0.5 --out " + lifted.string());
  CHECK(ok.exit_code == 0);
  const qcqpkit::InstanceFile file = qcqpkit::parse_instance(slurp(lifted));
  CHECK(file.n == 5);
}

TEST_CASE("render produces an SVG only for planar instances") {
  const fs::path ring = temp_file("ring_render.json");
  const fs::path svg = temp_file("ring.svg");
  REQUIRE(run_cli("generate disk-ring --r 0.5 --out " + ring.string()).exit_code == 0);
  const RunResult r =
      run_cli("render " + ring.string() + " --out " + svg.string() + " --bbox -2,2,-2,2 --resolution 128");
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(svg).find("</svg>") != std::string::npos);

  const fs::path balls = temp_file("balls.json");
  REQUIRE(run_cli("generate balls --balls '0,0,0:0.5;1,0,0:0.5' --out " + balls.string()).exit_code == 0);
  CHECK(run_cli("render " + balls.string() + " --out " + svg.string()).exit_code == 2);
}

TEST_CASE("table1 command succeeds and is deterministic") {
  const RunResult a = run_cli("table1 --json");
  const RunResult b = run_cli("table1 --json");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  const nlohmann::json j = nlohmann::json::parse(a.out);
  REQUIRE(j.size() == 6);
  CHECK(j[5]["case_path"] == "ii_then_i");
}

TEST_CASE("named objectives solve through the CLI") {
  qcqpkit::InstanceFile file;
  file.n = 3;
  file.H = qcqpkit::last_axis_homogenizer(3);
  file.set = qcqpkit::table1_constraints();
  const std::vector<qcqpkit::SymMatrix> objectives = qcqpkit::table1_objectives();
  for (int k = 0; k < 6; ++k) file.objectives["q" + std::to_string(k + 1)] = objectives[k];
  const fs::path path = temp_file("benchmark.json");
  std::ofstream(path) << qcqpkit::serialize_instance(file);

  const RunResult r = run_cli("solve " + path.string() + " --objective q1 --json");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["objective"].get<double>()) <= 1e-4);
  REQUIRE(j["extraction"].is_object());
  CHECK(j["extraction"]["case_path"] == "ii");
  REQUIRE(j["extraction"]["u"].is_array());
  CHECK(std::abs(j["extraction"]["u"][0].get<double>() - 2.0) <= 1e-3);
  CHECK(std::abs(j["extraction"]["u"][1].get<double>() - 1.0) <= 1e-3);

  CHECK(run_cli("solve " + path.string() + " --objective q9").exit_code == 2);
}

TEST_CASE("repeated json solves are byte-identical") {
  const fs::path ring = temp_file("ring_det.json");
  REQUIRE(run_cli("generate disk-ring --r 0.5 --out " + ring.string()).exit_code == 0);
  const std::string cmd = "solve " + ring.string() + " --objective 1,0,1,0,0,-1 --json";
  const RunResult a = run_cli(cmd);
  const RunResult b = run_cli(cmd);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}
