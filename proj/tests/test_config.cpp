#include <doctest.h>

#include <fstream>

#include "bubble/config.hpp"

using namespace bubble;

TEST_CASE("defaults validate") {
  BubbleConfig cfg;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("field-level validation messages") {
  BubbleConfig cfg;
  cfg.R_out = 0.5;  // inside the interface
  CHECK_THROWS_WITH_AS(cfg.validate(), "config: R_out must exceed R_s", std::invalid_argument);
  cfg = BubbleConfig{};
  cfg.nu = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = BubbleConfig{};
  cfg.K = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = BubbleConfig{};
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("config file parsing") {
  const std::string path = "test_config_tmp.cfg";
  {
    std::ofstream out(path);
    out << "# comment line\n";
    out << "R_s = 1.5\n";
    out << "R_out=3.0   # trailing comment\n";
    out << "K = 12\n";
    out << "lambda = 0.7\n";
  }
  const BubbleConfig cfg = load_config(path);
  CHECK(cfg.R_s == 1.5);
  CHECK(cfg.R_out == 3.0);
  CHECK(cfg.K == 12);
  CHECK(cfg.lambda == 0.7);
  CHECK(cfg.nu == 1.0);  // untouched default

  {
    std::ofstream out(path);
    out << "viscosity = 2\n";
  }
  CHECK_THROWS_AS(load_config(path), std::invalid_argument);  // unknown key
  {
    std::ofstream out(path);
    out << "just words\n";
  }
  CHECK_THROWS_AS(load_config(path), std::invalid_argument);  // no '='
  std::remove(path.c_str());
}

TEST_CASE("fingerprint separates physical parameters and backend") {
  BubbleConfig a, b;
  CHECK(a.fingerprint("analytic") == b.fingerprint("analytic"));
  CHECK(a.fingerprint("analytic") != a.fingerprint("fd"));
  b.nu = 2.0;
  CHECK(a.fingerprint("analytic") != b.fingerprint("analytic"));
  // grid resolution only matters to the discretized backend
  BubbleConfig c = a;
  c.N_r = 256;
  CHECK(a.fingerprint("analytic") == c.fingerprint("analytic"));
  CHECK(a.fingerprint("fd") != c.fingerprint("fd"));
  // time-stepping parameters never enter the operator fingerprint
  BubbleConfig d = a;
  d.dt = 0.123;
  d.T = 9.0;
  CHECK(a.fingerprint("fd") == d.fingerprint("fd"));
}
