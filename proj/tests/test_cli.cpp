#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli_run.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string t1_file = std::string(PTSS_TEST_DATA) + "/t1.ptt";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("parse and invert the running example") {
  auto r = cli::run("parse " + t1_file);
  CHECK(r.status == 0);
  CHECK(r.out == "->(a,b,+(*(<-(X(c,tau),d),e),f),g)\n");
  r = cli::run("invert " + t1_file);
  CHECK(r.status == 0);
  CHECK(r.out == "<-(a,b,+(*(->(X(c,tau),d),e),f),g)\n");
  r = cli::run("parse -e ' X ( a , tau ) '");
  CHECK(r.out == "X(a,tau)\n");
}

TEST_CASE("search prints run, length and counts") {
  const auto r = cli::run("search --strategy bd " + t1_file);
  CHECK(r.status == 0);
  CHECK(r.out.rfind("v0 F->O\n", 0) == 0);
  CHECK(r.out.find("length 24\n") != std::string::npos);
  CHECK(r.out.find("expanded 76 (forward ") != std::string::npos);
  const auto ud = cli::run("search -s ud -e '->(a,b)'");
  CHECK(ud.out ==
        "v0 F->O\nv1 F->O\nv1 O->C\nv2 F->O\nv2 O->C\nv0 O->C\nlength 6\nexpanded 7\n");
}

TEST_CASE("lang") {
  auto r = cli::run("lang --bound 1 -e '*(a,b)'");
  CHECK(r.out == "<a>\n<a,b,a>\n");
  r = cli::run("lang --method statespace -e 'X(a,tau)'");
  CHECK(r.out == "<>\n<a>\n");
}

TEST_CASE("exit codes") {
  CHECK(cli::run("parse -e '*(a,b,c)'").status == 1);
  CHECK(cli::run("parse /nonexistent/file.ptt").status == 1);
  CHECK(cli::run("search --cap 5 -e '+(a,b,c,d,e)'").status == 1);
  CHECK(cli::run("").status == 2);
  CHECK(cli::run("frobnicate").status == 2);
  CHECK(cli::run("search --strategy dfs -e a").status == 2);
  CHECK(cli::run("lang").status == 2);
  CHECK(cli::run("gen --count many").status == 2);
  CHECK(cli::run("--help").status == 0);
  CHECK(cli::run("--help").out.find("Tree grammar") != std::string::npos);
}

TEST_CASE("gen is deterministic and feeds bench") {
  const auto a = cli::run("gen --seed 42 --count 10");
  const auto b = cli::run("gen --seed 42 --count 10");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != cli::run("gen --seed 43 --count 10").out);

  const fs::path dir = fs::temp_directory_path() / ("ptss_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "seed=42\ncount=10\nrepetitions=1\n";
  }
  // flags win over the config file
  auto c = cli::run("gen --config " + (dir / "run.cfg").string() + " --count 4 -o " +
                    (dir / "c.ptt").string());
  REQUIRE(c.status == 0);
  const std::string corpus = slurp(dir / "c.ptt");
  CHECK(corpus.find("seed=42 count=4") != std::string::npos);

  c = cli::run("bench --corpus " + (dir / "c.ptt").string() + " --out " +
               (dir / "out.csv").string() + " --config " + (dir / "run.cfg").string());
  CHECK(c.status == 0);
  CHECK(c.out.find("records 4, flagged 0") != std::string::npos);
  const std::string csv = slurp(dir / "out.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  fs::remove_all(dir);
}
