#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "amc/commands.hpp"

using namespace amc;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "amc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "amc_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("defaults prints the effective config") {
    const auto r = run({"defaults"});
    CHECK(r.code == 0);
    CHECK(r.out.find("N0_ratio = 50") != std::string::npos);
    CHECK(r.out.find("I = 30") != std::string::npos);
  }

  TEST_CASE("scaling sweep has 25 points for each architecture") {
    const auto r = run({"sweep", "--scenario", "scaling"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# amc ", 0) == 0);
    CHECK(line.find("config_hash=") != std::string::npos);
    CHECK(line.find("seed=42") != std::string::npos);
    CHECK(line.find("prng=xoshiro256**") != std::string::npos);
    std::getline(in, line);
    CHECK(line == "scenario,param_name,param_value,arch,knowledge,KD,KD_new,threshold,mean0,var0,"
                  "mean1,var1,bep_analytic,bep_mc,mc_se,trials");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 75);
  }

  TEST_CASE("sweeps are byte-identical on rerun") {
    const auto a = scratch("a.csv").string();
    const auto b = scratch("b.csv").string();
    CHECK(run({"sweep", "-s", "shift", "-n", "2e4", "--seed", "3", "-o", a}).code == 0);
    CHECK(run({"sweep", "-s", "shift", "-n", "2e4", "--seed", "3", "-j", "2", "-o", b}).code == 0);
    CHECK(read_file(a) == read_file(b));
    CHECK(read_file(a).find("2.00000000000e+01") != std::string::npos);
  }

  TEST_CASE("response curve contains the half-saturation row") {
    const auto r = run({"response-curve", "--kd", "41.65"});
    CHECK(r.code == 0);
    CHECK(r.out.find("single,4.16500000000e+01,,4.16500000000e+01,5.00000000000e-01\n") !=
          std::string::npos);
    CHECK(r.out.find("# dynamic_range arch=single") != std::string::npos);
    const auto tuned = run({"response-curve", "--at", "20", "-c",
                            write_file("shift.cfg", "[scenario]\nkind = shift\n")});
    CHECK(tuned.code == 0);
    CHECK(tuned.out.find("\nREAR,") != std::string::npos);
  }

  TEST_CASE("svg output") {
    const auto svg = scratch("plot.svg").string();
    CHECK(run({"sweep", "-s", "shift", "-o", scratch("s.csv").string(), "--svg", svg}).code == 0);
    CHECK(read_file(svg).rfind("<svg", 0) == 0);
  }

  TEST_CASE("exit codes and one-line errors") {
    const auto bad_p1 = run({"sweep", "-c", write_file("p1.cfg", "[channel]\np1 = 1.5\n")});
    CHECK(bad_p1.code == 2);
    CHECK(bad_p1.err == "amc: error kind=ValidationError message=\"p1 in (0,1)\"\n");

    const auto bad_key = run({"sweep", "-c", write_file("dd.cfg", "[channel]\ndd = 1\n")});
    CHECK(bad_key.code == 1);
    CHECK(bad_key.err.find("kind=ParseError line=2 key=\"dd\"") != std::string::npos);

    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"sweep", "-s", "nope"}).code == 1);
    CHECK(run({"sweep", "-c", "/nonexistent/x.cfg"}).code == 1);
    CHECK(run({"sweep", "-s", "isi-memory", "-g", "0,40"}).code == 2);
  }

  TEST_CASE("the installed binary reports exit codes") {
    const std::string exe = AMC_CLI_PATH;
    const auto out = scratch("bin.txt").string();
    const int ok = std::system((exe + " defaults > " + out).c_str());
    CHECK(ok == 0);
    const int bad = std::system((exe + " sweep -c " + write_file("b.cfg", "[channel]\np1 = 2\n") +
                                 " > " + out + " 2>&1")
                                    .c_str());
    CHECK(WEXITSTATUS(bad) == 2);
  }
}
