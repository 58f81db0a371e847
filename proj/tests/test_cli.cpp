// End-to-end checks of the installed command-line surface: spawns the real
// binary and inspects exit codes, stdout/stderr and written artifacts.
// PLAP_CLI_BIN and PLAP_TEST_DATA are injected by the build.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

#ifndef PLAP_CLI_BIN
#error "PLAP_CLI_BIN must point at the plap executable"
#endif
#ifndef PLAP_TEST_DATA
#error "PLAP_TEST_DATA must point at the tests/data directory"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr interleaved
};

std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("plap_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// Runs `plap <args>` with an optional PLAP_OUTPUT_DIR, captures both streams.
RunResult run_cli(const std::string& args, const std::string& output_env = "") {
  const std::string capture =
      (std::filesystem::temp_directory_path() / "plap_cli_capture.txt")
          .string();
  std::string command;
  if (!output_env.empty()) {
    command += "PLAP_OUTPUT_DIR='" + output_env + "' ";
  }
  command += std::string(PLAP_CLI_BIN) + " " + args + " > '" + capture +
             "' 2>&1";
  const int raw = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(raw);
  result.output = slurp(capture);
  return result;
}

std::string data_file(const std::string& leaf) {
  return std::string(PLAP_TEST_DATA) + "/" + leaf;
}

}  // namespace

TEST_CASE("--version and the kernel catalog") {
  const RunResult version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.output.rfind("plap 0.", 0) == 0);

  const RunResult kernels = run_cli("kernels");
  CHECK(kernels.exit_code == 0);
  CHECK(kernels.output.find("halfplane") != std::string::npos);
  CHECK(kernels.output.find("checkerboard") != std::string::npos);
  CHECK(kernels.output.find("regularity:") != std::string::npos);
}

TEST_CASE("usage errors exit 1 and print the synopsis") {
  const RunResult none = run_cli("");
  CHECK(none.exit_code == 1);
  CHECK(none.output.find("usage:") != std::string::npos);

  const RunResult unknown = run_cli("frobnicate");
  CHECK(unknown.exit_code == 1);
  CHECK(unknown.output.find("unknown command") != std::string::npos);

  const RunResult no_config = run_cli("run");
  CHECK(no_config.exit_code == 1);
  CHECK(no_config.output.find("config path") != std::string::npos);

  const RunResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.output.find("PLAP_OUTPUT_DIR") != std::string::npos);
}

TEST_CASE("a simulate config runs to completion") {
  const std::string out = scratch_dir("simulate");
  const RunResult result = run_cli("run " + data_file("simulate_small.ini"), out);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("run complete, gates passed") != std::string::npos);
  CHECK(std::filesystem::exists(out + "/trajectory.csv"));
  CHECK(std::filesystem::exists(out + "/trajectory.csv.meta"));
  CHECK(slurp(out + "/manifest.txt").find("gates = passed") !=
        std::string::npos);
}

TEST_CASE("failure statuses become exit codes") {
  const std::string out = scratch_dir("failures");

  // Missing file: io = 15.
  const RunResult missing = run_cli("run /nonexistent/plap.ini", out);
  CHECK(missing.exit_code == 15);
  CHECK(missing.output.find("io error") != std::string::npos);

  // Unknown key: validation = 13.
  const RunResult unknown = run_cli("run " + data_file("unknown_key.ini"), out);
  CHECK(unknown.exit_code == 13);
  CHECK(unknown.output.find("validation error") != std::string::npos);
  CHECK(unknown.output.find("typo_key") != std::string::npos);

  // Malformed INI: parse = 12.
  const RunResult malformed =
      run_cli("run " + data_file("malformed.ini"), out);
  CHECK(malformed.exit_code == 12);
  CHECK(malformed.output.find("parse error") != std::string::npos);

  // Impossible slope gate: gate = 14, artifacts still written.
  const std::string gate_out = scratch_dir("gate");
  const RunResult gate =
      run_cli("run " + data_file("impossible_gate.ini"), gate_out);
  CHECK(gate.exit_code == 14);
  CHECK(gate.output.find("gate error") != std::string::npos);
  CHECK(std::filesystem::exists(gate_out + "/rate_tau.csv"));
  CHECK(slurp(gate_out + "/manifest.txt").find("gates = FAILED") !=
        std::string::npos);
}

TEST_CASE("verify writes reports where --out or the environment points") {
  const std::string out = scratch_dir("verify");
  const RunResult result = run_cli("verify --seed 11 --out '" + out + "'");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("invariant suite passed") != std::string::npos);
  CHECK(slurp(out + "/invariants.txt").find("all invariants hold") !=
        std::string::npos);
  CHECK(std::filesystem::exists(out + "/invariants.csv"));
  CHECK(std::filesystem::exists(out + "/manifest.txt"));

  // The environment override beats --out.
  const std::string env_out = scratch_dir("verify_env");
  const std::string unused = scratch_dir("verify_unused");
  const RunResult env_result =
      run_cli("verify --seed 11 --out '" + unused + "'", env_out);
  CHECK(env_result.exit_code == 0);
  CHECK(std::filesystem::exists(env_out + "/invariants.txt"));
  CHECK_FALSE(std::filesystem::exists(unused + "/invariants.txt"));

  const RunResult bad_seed = run_cli("verify --seed pi");
  CHECK(bad_seed.exit_code == 1);
  CHECK(bad_seed.output.find("--seed") != std::string::npos);
}
