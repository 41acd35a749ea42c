// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ricsim/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ricsim::cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string source(const std::string& rel) { return std::string(RICSIM_SOURCE_DIR) + "/" + rel; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string("\"") + RICSIM_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("run matches golden CSV output") {
  for (const char* name : {"node_sweep", "kpi_sweep", "redundancy_small"}) {
    CAPTURE(name);
    const auto r = cli({"run", source(std::string("configs/") + name + ".cfg")});
    REQUIRE(r.code == 0);
    CHECK(r.out == slurp(source(std::string("tests/golden/") + name + ".csv")));
  }
}

TEST_CASE("node sweep has one row per node count") {
  const auto r = cli({"run", source("configs/node_sweep.cfg")});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 61);
  CHECK(r.out.find("\n60,no_dedup,420,42000.000,42000000.0,54.1308,") != std::string::npos);
}

TEST_CASE("output is byte-stable across runs") {
  const auto a = cli({"run", source("configs/mixed_periods.cfg")});
  const auto b = cli({"run", source("configs/mixed_periods.cfg")});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out) == 4);
}

TEST_CASE("sweep subcommand and JSON format") {
  const auto r = cli({"sweep", source("configs/kpi_sweep.cfg"), "--axis", "kpis", "--range", "1:3", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 3);
  CHECK(j[2]["sweep_value"] == 3.0);
  CHECK(j[2]["streams"] == 12);
  CHECK(j[2]["mode"] == "no_dedup");
}

TEST_CASE("seed override and output file") {
  const fs::path tmp = fs::temp_directory_path() / "ricsim_cli_out.csv";
  const auto r = cli({"run", source("configs/mixed_periods.cfg"), "--seed", "3", "--out", tmp.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const std::string written = slurp(tmp);
  CHECK(written.rfind("sweep_value,mode,", 0) == 0);
  CHECK(written != cli({"run", source("configs/mixed_periods.cfg")}).out);
  fs::remove(tmp);
}

TEST_CASE("calibrate") {
  const fs::path tmp = fs::temp_directory_path() / "ricsim_points.csv";
  {
    std::ofstream f(tmp);
    f << "sample_rate,watts\n0,34.5\n500000,268.2\n";
  }
  const auto r = cli({"calibrate", tmp.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out == "ric_static_watts,cpu_static_watts,watts_per_sample_rate\n34.500000,28.000000,4.674000000e-04\n");
  {
    std::ofstream f(tmp);
    f << "sample_rate,watts\n0,34.5\n";
  }
  CHECK(cli({"calibrate", tmp.string()}).code == 2);
  fs::remove(tmp);
}

TEST_CASE("usage errors exit with 2") {
  const auto missing = cli({"run", "missing.cfg"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot read missing.cfg") != std::string::npos);
  CHECK(cli({"run", source("configs/node_sweep.cfg"), "--bogus"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"sweep", source("configs/node_sweep.cfg"), "--axis", "colour", "--range", "1:2"}).code == 2);
  CHECK(cli({"run", source("configs/node_sweep.cfg"), "--format", "xml"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("installed binary exit codes") {
  CHECK(run_binary("run missing.cfg") == 2);
  CHECK(run_binary("--help") == 0);
  CHECK(run_binary("run \"" + source("configs/redundancy_small.cfg") + "\"") == 0);
  CHECK(run_binary("node --broker 127.0.0.1:1 --node-id 1 --kpis 1 --duration 1") == 1);
}
