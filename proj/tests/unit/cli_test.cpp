#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "support/common.hpp"

using namespace tsa::testing;

namespace {

struct Output {
  int code = -1;
  std::string out;
};

Output tsa_cli(const std::string& args) {
  std::string cmd = std::string(TSA_CLI) + " " + args + " 2>/dev/null";
  Output o;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) o.out.append(buf.data(), n);
  int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string temp_program(const std::string& name, const std::string& text) {
  std::string path = std::string(TSA_TMP_DIR) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("analyze in both modes") {
  Output ctx = tsa_cli("analyze " + program_path("fig51.tsp"));
  CHECK(ctx.code == 0);
  CHECK(ctx.out.find("[α* ↦ {4}; β* ↦ {6}]") != std::string::npos);
  Output naive = tsa_cli("analyze --mode naive " + program_path("fig55.tsp"));
  CHECK(naive.code == 0);
  CHECK(naive.out.find("a.x : {1, 2, null}") != std::string::npos);
  Output json = tsa_cli("analyze --format json " + program_path("fig55.tsp"));
  CHECK(json.code == 0);
  auto j = nlohmann::json::parse(json.out);
  CHECK(j["mode"] == "ctx");
  CHECK(tsa_cli("analyze --ctx-depth 2 --heap-depth 2 " + program_path("factorial.tsp")).code == 0);
}

TEST_CASE("run, parse and convert") {
  Output r = tsa_cli("run --input hello " + program_path("curried_add.tsp"));
  CHECK(r.code == 0);
  CHECK(r.out.rfind("Finished\n", 0) == 0);
  CHECK(r.out.find("result = 10") != std::string::npos);
  CHECK(r.out.find("input = \"hello\"") != std::string::npos);
  CHECK(tsa_cli("run --surface " + program_path("fig51.tsp")).out.rfind("Finished", 0) == 0);
  std::string loop = temp_program("loop.tsp", "while (true) { }\n");
  CHECK(tsa_cli("run --fuel 1000 " + loop).out.rfind("FuelExhausted", 0) == 0);
  CHECK(tsa_cli("parse " + program_path("fig51.tsp")).out.find("function increment(x)") != std::string::npos);
  CHECK(tsa_cli("convert " + program_path("fig51.tsp")).out.find("bind-closure increment") != std::string::npos);
  CHECK(tsa_cli("convert --extract-loops " + program_path("fact_loop.tsp")).code == 0);
}

TEST_CASE("exit codes") {
  std::string div = temp_program("div.tsp", "var x = 1 / 0\n");
  Output d = tsa_cli("run " + div);
  CHECK(d.code == 1);
  CHECK(d.out.rfind("RuntimeError(DivByZero)", 0) == 0);
  CHECK(tsa_cli("parse " + temp_program("bad.tsp", "var x = (")).code == 1);
  CHECK(tsa_cli("convert " + temp_program("closure.tsp", "var closure = 1\n")).code == 1);
  CHECK(tsa_cli("run /nonexistent/file.tsp").code != 0);
  CHECK(tsa_cli("analyze --mode bogus " + program_path("fig51.tsp")).code != 0);
  CHECK(tsa_cli("").code != 0);
}
