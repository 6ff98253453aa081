#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ghzforge/json_io.hpp"
#include "ghzforge/paradox.hpp"
#include "fixtures.hpp"

using namespace ghzforge;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "ghzforge_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the installed binary through the shell; prefix can set env variables.
RunResult run_cli(const std::string& args, const std::string& prefix = "") {
  auto dir = scratch_dir();
  auto out_path = dir / "stdout.txt";
  auto err_path = dir / "stderr.txt";
  std::string command = prefix + GHZFORGE_CLI_PATH " " + args + " > " +
                        out_path.string() + " 2> " + err_path.string();
  int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

Json out_json(const RunResult& result) {
  return parse_json_text(result.out, "stdout");
}

std::string write_scratch(const std::string& name, const std::string& text) {
  auto path = scratch_dir() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

}  // namespace

TEST_CASE("construct matches library output for every family") {
  RunResult six = run_cli("construct --family theorem2 --n 6");
  REQUIRE(six.exit_code == 0);
  CHECK(out_json(six).dump() ==
        instance_to_json(assemble_instance(ladder_vector(6), 2)).dump());

  RunResult mermin = run_cli("construct --family mermin");
  REQUIRE(mermin.exit_code == 0);
  CHECK(out_json(mermin).dump() == instance_to_json(mermin_instance()).dump());

  RunResult three = run_cli("construct --family three-setting --n 6 --d 4");
  REQUIRE(three.exit_code == 0);
  Json parsed = out_json(three);
  CHECK(parsed["certified"] == true);
  CHECK(parsed.dump() ==
        instance_to_json(assemble_instance(three_setting_vector(6, 4), 4))
            .dump());
}

TEST_CASE("construct rejects invalid combinations with diagnostics") {
  RunResult odd = run_cli("construct --family three-setting --n 5 --d 2");
  CHECK(odd.exit_code == 2);
  CHECK(odd.err.find("even n") != std::string::npos);
  CHECK(run_cli("construct --family theorem2 --n 6 --d 4").exit_code == 2);
  CHECK(run_cli("construct --family mermin --n 5").exit_code == 2);
  CHECK(run_cli("construct --family nonsense --n 4").exit_code == 2);
  CHECK(run_cli("construct --n 4").exit_code == 2);  // family is required
}

TEST_CASE("custom vector files feed construct") {
  std::string path = write_scratch(
      "ladder5.json", setting_vector_to_json(ladder_vector(5)).dump());
  RunResult custom =
      run_cli("construct --family custom-file --input " + path);
  REQUIRE(custom.exit_code == 0);
  CHECK(out_json(custom).dump() ==
        instance_to_json(assemble_instance(ladder_vector(5), 2)).dump());

  std::string bad = write_scratch("bad_vector.json", "[\"1/3\", \"1/3\"]");
  RunResult rejected =
      run_cli("construct --family custom-file --input " + bad);
  CHECK(rejected.exit_code == 2);  // fails the admissibility gate
}

TEST_CASE("verify round-trips constructed instances") {
  auto dir = scratch_dir();
  std::string inst = (dir / "l4.json").string();
  REQUIRE(run_cli("construct --family theorem2 --n 4 --output " + inst)
              .exit_code == 0);
  // The written file is bit-identical to a fresh library serialization.
  CHECK(read_file(inst) ==
        instance_to_json(assemble_instance(ladder_vector(4), 2)).dump(2) +
            "\n");
  RunResult verify = run_cli("verify --input " + inst + " --dense-check");
  REQUIRE(verify.exit_code == 0);
  Json report = out_json(verify);
  CHECK(report["version"] == kVersion);
  CHECK(report["config"]["command"] == "verify");
  CHECK(report["config"]["dense_check"] == true);
  CHECK(report["config_hash"].get<std::string>().size() == 16);
  CHECK(report["pass"] == true);
  REQUIRE(report["observables"].size() == 6);
  for (const Json& row : report["observables"]) {
    CHECK(row["pass"] == true);
    CHECK(row["measured"] == row["target"]);
    CHECK(row["residual"].get<double>() <= 1e-10);
  }
}

TEST_CASE("tampered targets fail verification naming the observable") {
  Json inst = instance_to_json(assemble_instance(ladder_vector(4), 2));
  inst["targets"][2] = "1/2";
  std::string path = write_scratch("tampered.json", inst.dump());
  RunResult verify = run_cli("verify --input " + path);
  CHECK(verify.exit_code == 1);
  CHECK(verify.err.find("observable 2") != std::string::npos);
  Json report = out_json(verify);
  CHECK(report["pass"] == false);
  CHECK(report["observables"][2]["pass"] == false);
  CHECK(report["observables"][2]["measured"] == "0");
  CHECK(report["observables"][3]["pass"] == true);
}

TEST_CASE("malformed input exits with the parse code") {
  std::string path = write_scratch("garbage.json", "{definitely not json");
  RunResult verify = run_cli("verify --input " + path);
  CHECK(verify.exit_code == 4);
  CHECK(verify.err.find("parse error") != std::string::npos);
  CHECK(run_cli("refute --input " + path).exit_code == 4);
  CHECK(run_cli("verify --input /nonexistent.json").exit_code == 2);
}

TEST_CASE("refute reports the exhaustive verdict") {
  std::string path = write_scratch(
      "mermin.json", instance_to_json(mermin_instance()).dump());
  RunResult refute = run_cli("refute --input " + path);
  REQUIRE(refute.exit_code == 0);
  Json report = out_json(refute);
  CHECK(report["verdict"] == "paradox");
  CHECK(report["satisfying_count"] == 0);
  CHECK(report["enumerated"] == 64);
  CHECK(report["parity"]["verdict"] == "contradiction");

  // Tiny budget: the parity certificate still settles contradiction cases.
  RunResult certificate = run_cli("refute --input " + path + " --budget 7");
  REQUIRE(certificate.exit_code == 0);
  Json parity_only = out_json(certificate);
  CHECK(parity_only["verdict"] == "paradox");
  CHECK(parity_only["satisfying_count"].is_null());
  CHECK(parity_only["enumerated"] == 0);

  // Without a contradiction the budget violation surfaces as exit 3.
  Json tampered = instance_to_json(assemble_instance(ladder_vector(4), 2));
  tampered["targets"][2] = "1/2";
  std::string tampered_path =
      write_scratch("tampered_refute.json", tampered.dump());
  CHECK(run_cli("refute --input " + tampered_path + " --budget 7")
            .exit_code == 3);
}

TEST_CASE("bell reports exact classical and quantum values") {
  RunResult bell = run_cli("bell --family theorem2 --n 4 --dense-check");
  REQUIRE(bell.exit_code == 0);
  Json report = out_json(bell);
  CHECK(report["classical_bound"] == "4");
  CHECK(report["quantum_value"].get<double>() == doctest::Approx(6).epsilon(1e-9));
  CHECK(report["gap"].get<double>() == doctest::Approx(2).epsilon(1e-9));
  CHECK(report["terms"] == 6);
  CHECK(report["sigma"] == 2);
  CHECK(run_cli("bell --family theorem2 --n 4 --d 4").exit_code == 2);
  CHECK(run_cli("bell --family mermin").exit_code == 2);
}

TEST_CASE("genuine flags the reducible control") {
  std::string control = write_scratch(
      "control.json",
      instance_to_json(testing::reducible_control_instance()).dump());
  RunResult genuine = run_cli("genuine --input " + control);
  REQUIRE(genuine.exit_code == 0);
  Json report = out_json(genuine);
  CHECK(report["genuine"] == false);
  CHECK(report["witness"]["beta"] == Json::array({1, 2, 3}));

  std::string mermin = write_scratch(
      "mermin_genuine.json", instance_to_json(mermin_instance()).dump());
  RunResult intact = run_cli("genuine --input " + mermin);
  REQUIRE(intact.exit_code == 0);
  CHECK(out_json(intact)["genuine"] == true);
}

TEST_CASE("environment variables override missing flags") {
  RunResult six =
      run_cli("construct --family theorem2", "GHZFORGE_N=6 ");
  REQUIRE(six.exit_code == 0);
  CHECK(out_json(six)["n"] == 6);
  RunResult flag_wins =
      run_cli("construct --family theorem2 --n 4", "GHZFORGE_N=6 ");
  REQUIRE(flag_wins.exit_code == 0);
  CHECK(out_json(flag_wins)["n"] == 4);
}

TEST_CASE("sample emits reproducible reports and CSV") {
  auto dir = scratch_dir();
  std::string csv_path = (dir / "batches.csv").string();
  std::string args =
      "sample --family theorem2 --n 4 --shots 500 --seed 11 --csv " + csv_path;
  RunResult first = run_cli(args);
  REQUIRE(first.exit_code == 0);
  Json report = out_json(first);
  CHECK(report["estimate"] == 6.0);
  CHECK(report["estimate_std_error"] == 0.0);
  CHECK(report["generator"] == "splitmix64");
  CHECK(report["config"]["shots"] == 500);
  CHECK(report["config"]["seed"] == 11);
  std::string csv = read_file(csv_path);
  CHECK(csv.rfind("term,batch,mean,stderr\n", 0) == 0);

  RunResult second = run_cli(args);
  Json again = out_json(second);
  report.erase("wall_ms");
  again.erase("wall_ms");
  CHECK(report.dump() == again.dump());
}
