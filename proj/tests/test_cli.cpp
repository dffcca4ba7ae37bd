#include <doctest.h>

#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "tpng/io.hpp"

using namespace tpng;

namespace {

const char* cli_path() { return std::getenv("TPNG_CLI"); }

int run(const std::string& args) {
  const std::string cmd =
      std::string(cli_path()) + " " + args + " > cli_last_out.txt 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

double t_of(const std::string& diagram_path) {
  const auto j = nlohmann::json::parse(read_file(diagram_path));
  return j.at("params").at("t").get<double>();
}

#define NEED_CLI()                                       \
  if (!cli_path()) {                                     \
    MESSAGE("TPNG_CLI not set; driver checks skipped");  \
    return;                                              \
  }

} // namespace

TEST_CASE("usage surface") {
  NEED_CLI();
  CHECK(run("--help") == 0);
  CHECK(run("simulate --help") == 0);
  CHECK(run("") == 1);             // a subcommand is required
  CHECK(run("frobnicate") == 1);   // unknown subcommand
  CHECK(run("simulate --t 1.5 --width 4 --height 4") == 1);
  CHECK(run("experiment bogus-name") == 1);
  CHECK(run("render no_such_file.json") == 1);
}

TEST_CASE("sampling runs are reproducible files") {
  NEED_CLI();
  REQUIRE(run("simulate --t 0.5 --width 8 --height 5 --seed 9 --out cli_a.json") == 0);
  REQUIRE(run("simulate --t 0.5 --width 8 --height 5 --seed 9 --out cli_b.json") == 0);
  CHECK(read_file("cli_a.json") == read_file("cli_b.json"));
  CHECK(run("simulate --t 0.5 --width 8 --height 5 --seed 10 --out cli_c.json") == 0);
  CHECK(read_file("cli_a.json") != read_file("cli_c.json"));

  CHECK(run("render cli_a.json --out cli_a.svg") == 0);
  const std::string svg = read_file("cli_a.svg");
  CHECK(svg.rfind("<svg ", 0) == 0);
}

TEST_CASE("flags beat the config file, which beats the environment") {
  NEED_CLI();
  write_file("cli_t.cfg", "t=0.9\n");
  REQUIRE(run("--config cli_t.cfg simulate --t 0.25 --width 6 --height 4 --seed 3 "
              "--out cli_f.json") == 0);
  CHECK(t_of("cli_f.json") == doctest::Approx(0.25));
  REQUIRE(run("--config cli_t.cfg simulate --width 6 --height 4 --seed 3 "
              "--out cli_g.json") == 0);
  CHECK(t_of("cli_g.json") == doctest::Approx(0.9));

  const std::string env_cmd = std::string("TPNG_T=0.7 ") + cli_path() +
                              " simulate --width 6 --height 4 --seed 3 --out cli_h.json"
                              " > cli_last_out.txt 2>&1";
  REQUIRE(WEXITSTATUS(std::system(env_cmd.c_str())) == 0);
  CHECK(t_of("cli_h.json") == doctest::Approx(0.7));

  const std::string both_cmd = std::string("TPNG_T=0.7 ") + cli_path() +
                               " --config cli_t.cfg simulate --width 6 --height 4"
                               " --seed 3 --out cli_i.json > cli_last_out.txt 2>&1";
  REQUIRE(WEXITSTATUS(std::system(both_cmd.c_str())) == 0);
  CHECK(t_of("cli_i.json") == doctest::Approx(0.9));

  write_file("cli_bad.cfg", "definitely_not_an_option=1\n");
  CHECK(run("--config cli_bad.cfg simulate --width 4 --height 4") == 1);
}

TEST_CASE("experiment runs write report and table with stable bytes") {
  NEED_CLI();
  REQUIRE(run("experiment conservation --replicas 8 --seed 4 --out cli_cons") == 0);
  REQUIRE(run("experiment conservation --replicas 8 --seed 4 --out cli_cons2") == 0);
  const auto j = nlohmann::json::parse(read_file("cli_cons.json"));
  CHECK(j.at("schema") == "tpng-report/1");
  CHECK(j.at("verdict") == "pass");
  CHECK(read_file("cli_cons.csv") == read_file("cli_cons2.csv"));

  // shrunken significance tests must refuse to conclude: exit 3
  CHECK(run("experiment stationarity --replicas 6 --seed 4 --out cli_stat") == 3);

  CHECK(run("oracle-check --replicas 6 --seed 2") == 0);
}
