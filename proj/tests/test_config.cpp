#include "doctest.h"
#include "config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

using namespace pdegame;
using namespace pdegame::cli;

namespace {

RunConfig parse(std::vector<const char*> args) {
  args.insert(args.begin(), "pdegame");
  return parse_command_line(static_cast<int>(args.size()), args.data());
}

}  // namespace

TEST_CASE("eps ladder parsing") {
  const auto l = parse_ladder("0.2, 0.1,0.05");
  REQUIRE(l.size() == 3);
  CHECK(l[0] == 0.2);
  CHECK(l[2] == 0.05);
  CHECK_THROWS_AS(parse_ladder(""), ValidationError);
  CHECK_THROWS_AS(parse_ladder("0.2,abc"), ValidationError);
  CHECK_THROWS_AS(parse_ladder("0.2,-0.1"), ValidationError);
  CHECK_THROWS_AS(parse_ladder("1.5"), ValidationError);
}

TEST_CASE("exponent overrides are validated") {
  RunConfig cfg;
  cfg.alpha = 0.5;
  try {
    resolve_exponents(cfg);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("condition_pas violated") != std::string::npos);
  }
  cfg.alpha = 0.25;
  cfg.gamma = 0.9;
  try {
    resolve_exponents(cfg);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("gamma < 1−alpha violated") != std::string::npos);
  }
  cfg.gamma.reset();
  CHECK(resolve_exponents(cfg).gamma == doctest::Approx(0.5));
  CHECK_THROWS_AS(make_params(cfg, 1.5), ValidationError);
}

TEST_CASE("subcommand and flags") {
  const RunConfig c = parse({"solve", "--eps", "0.05", "--problem", "heat1d_linear_profile", "--threads", "3"});
  CHECK(c.command == "solve");
  CHECK(c.eps == 0.05);
  CHECK(c.problem == "heat1d_linear_profile");
  CHECK(c.threads == 3);
  CHECK_THROWS_AS(parse({}), ParseExit);
  CHECK_THROWS_AS(parse({"solve", "--mode", "bogus"}), ParseExit);
}

TEST_CASE("threads fall back to the environment") {
  setenv("PDEGAME_THREADS", "4", 1);
  CHECK(parse({"solve"}).threads == 4);
  CHECK(parse({"solve", "--threads", "2"}).threads == 2);
  setenv("PDEGAME_THREADS", "x", 1);
  CHECK_THROWS_AS(parse({"solve"}), ValidationError);
  unsetenv("PDEGAME_THREADS");
  CHECK(parse({"solve"}).threads == 1);
}

TEST_CASE("dumped config reads back to the same run") {
  RunConfig c = parse({"convergence", "--eps-ladder", "0.2,0.1", "--alpha", "0.2", "--dz", "0.05", "--levelset"});
  const std::string path = "pdegame_test_config.txt";
  {
    std::ofstream os(path);
    os << dump_config(c);
  }
  const RunConfig back = parse({"convergence", "--config", path.c_str()});
  std::remove(path.c_str());
  CHECK(back.eps_ladder == "0.2,0.1");
  REQUIRE(back.alpha.has_value());
  CHECK(*back.alpha == 0.2);
  CHECK(back.dz == 0.05);
  CHECK(back.levelset);
  RunConfig stripped = back;
  stripped.config_path.clear();
  CHECK(dump_config(stripped) == dump_config(c));
}
