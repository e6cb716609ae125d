#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <nlohmann/json.hpp>

#include "bergman/analysis.hpp"
#include "bergman/schemes.hpp"
#include "bergman/sequences.hpp"
#include "cli.hpp"

using namespace bergman;
using nlohmann::json;

namespace {

int run_cli(std::initializer_list<std::string> args) {
  return cli::run(std::vector<std::string>(args));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(bool(out));
  out << text;
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

// drops the manifest comment so runs with different prefixes can be compared
std::string csv_body(const std::string& text) {
  return text.substr(text.find('\n') + 1);
}

int run_binary(const std::string& tail) {
  const int status = std::system((std::string(BERGMAN_CLI_BIN) + " " + tail).c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("density run emits manifest-led CSV and JSON, rerunning byte-identically") {
  const std::string out = "/tmp/bergman_cli_den";
  auto once = [&] {
    REQUIRE(run_cli({"density", "--points", "lattice:0.5:0.9", "--weight", "standard:1",
                     "--a-spacing", "0.5", "--out", out}) == cli::kOk);
    return std::pair{slurp(out + ".csv"), slurp(out + ".json")};
  };
  const auto first = once();
  const auto second = once();
  CHECK(first == second);
  CHECK(first.first.rfind("# manifest: {", 0) == 0);

  const json j = load_json(out + ".json");
  CHECK(j.at("manifest").at("command") == "density");
  CHECK(j.at("manifest").at("version").get<std::string>() == std::string("0.1.0"));
  CHECK(j.at("manifest").at("config").at("weight") == "standard:1");
  CHECK(j.at("summary").at("estimate").get<double>() > 0.0);
  CHECK(j.at("summary").at("sup_per_r").size() == j.at("summary").at("r_grid").size());

  // the CSV holds one row per (transport, radius) pair below the data header
  std::istringstream rows(first.first);
  std::string line;
  int n = 0;
  while (std::getline(rows, line)) ++n;
  CHECK(n == 2 + static_cast<int>(j.at("summary").at("r_grid").size() *
                                  j.at("summary").at("transport_count").get<std::size_t>()));
}

TEST_CASE("flags override config-file keys which override defaults") {
  const std::string cfg = "/tmp/bergman_cli_cfg.json";
  spit(cfg, R"({"command":"density","alpha":0.7,"quad_res":64,"out":"/tmp/bergman_cli_p"})");

  const cli::RunConfig c =
      cli::make_config({"zeroset-norm", "--config", cfg, "--alpha", "0.25"});
  CHECK(c.command == "zeroset-norm");  // positional beats the file
  CHECK(c.alpha == 0.25);              // flag beats the file
  CHECK(c.quad_res == 64);             // file beats the default
  CHECK(c.p == 2.0);                   // untouched default
  CHECK(c.out == "/tmp/bergman_cli_p");
}

TEST_CASE("config errors exit with code 2") {
  const std::string bad = "/tmp/bergman_cli_bad.json";
  spit(bad, "{ nope");
  CHECK(run_cli({"density", "--config", bad}) == cli::kConfigError);

  spit(bad, R"({"command":"density","no_such_knob":1})");
  CHECK(run_cli({"--config", bad}) == cli::kConfigError);

  CHECK(run_cli({"frobnicate"}) == cli::kConfigError);
  CHECK(run_cli({}) == cli::kConfigError);
  CHECK(run_cli({"density", "--points", "random:10:0.8"}) == cli::kConfigError);  // no seed
  CHECK(run_cli({"density", "--points", "lattice:0.5"}) == cli::kConfigError);
  CHECK(run_cli({"density", "--points", "lattice:0.5:0.9", "--r-grid", "0.9:0.8:0.1"}) ==
        cli::kConfigError);
  // radii past every certified transport cap of a truncated generator
  CHECK(run_cli({"density", "--points", "lattice:0.6:0.8", "--r-grid", "0.9"}) ==
        cli::kConfigError);
}

TEST_CASE("scheme-check reports an inadmissible scheme without failing") {
  InterpolationScheme s;
  s.constants = {0.9, 0.05, 0.5, 1};  // claimed separation 0.5
  s.pairs.push_back({DiskRegion(DiskPoint(0.0, 0.0), 0.2), PointSet::of({DiskPoint(0.0, 0.0)})});
  s.pairs.push_back({DiskRegion(DiskPoint(0.05, 0.0), 0.2), PointSet::of({DiskPoint(0.05, 0.0)})});
  REQUIRE_FALSE(check_admissible(s).p3);  // the clusters sit 0.05 apart

  const std::string path = "/tmp/bergman_cli_badscheme.json";
  save_scheme(s, path);
  const std::string out = "/tmp/bergman_cli_chk";
  CHECK(run_cli({"scheme-check", "--scheme", path, "--out", out}) == cli::kOk);

  const json rep = load_json(out + ".json").at("report");
  CHECK_FALSE(rep.at("pass").get<bool>());
  CHECK_FALSE(rep.at("p3").get<bool>());
  CHECK(rep.at("p1").get<bool>());
  CHECK(rep.at("p2").get<bool>());
  CHECK(rep.at("p4").get<bool>());
  CHECK(rep.at("delta_star").get<double>() == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("scheme-build emits a checkable scheme that stays loadable") {
  const std::string out = "/tmp/bergman_cli_sb";
  REQUIRE(run_cli({"scheme-build", "--points", "lattice:0.5:0.9", "--delta", "0.15",
                   "--eps", "0.05", "--out", out}) == cli::kOk);

  const json j = load_json(out + ".json");
  CHECK(j.at("measured").at("pass").get<bool>());
  CHECK(j.at("manifest").at("config").at("delta").get<double>() == 0.15);

  // the manifest and measured blocks must not break the scheme reader
  const InterpolationScheme s = load_scheme(out + ".json");
  CHECK(s.pairs.size() == j.at("pairs").size());

  const std::string chk = "/tmp/bergman_cli_sbchk";
  CHECK(run_cli({"scheme-check", "--scheme", out + ".json", "--out", chk}) == cli::kOk);
  CHECK(load_json(chk + ".json").at("report").at("pass").get<bool>());
}

TEST_CASE("coset norms scale with the jets and the interpolant meets them") {
  const std::string pts = "/tmp/bergman_cli_pts.json";
  save_pointset(PointSet::of({DiskPoint(0.0, 0.0), DiskPoint(0.5, 0.0), DiskPoint(-0.4, 0.3)}),
                pts);
  const std::string sch = "/tmp/bergman_cli_sch";
  REQUIRE(run_cli({"scheme-build", "--points", pts, "--out", sch}) == cli::kOk);

  const std::string c1 = "/tmp/bergman_cli_cn1";
  REQUIRE(run_cli({"coset-norm", "--scheme", sch + ".json", "--out", c1}) == cli::kOk);
  const json n1 = load_json(c1 + ".json");
  REQUIRE(n1.at("cosets").size() == 3);
  CHECK(n1.at("total").get<double>() > 0.0);
  CHECK(n1.at("converged").get<bool>());

  // doubled jets double every p = 2 coset norm
  const std::string jets = "/tmp/bergman_cli_jets.json";
  spit(jets, R"({"jets": [[[[2,0]]], [[[2,0]]], [[[2,0]]]]})");
  const std::string c2 = "/tmp/bergman_cli_cn2";
  REQUIRE(run_cli({"coset-norm", "--scheme", sch + ".json", "--jets", jets, "--out", c2}) ==
          cli::kOk);
  const json n2 = load_json(c2 + ".json");
  for (std::size_t k = 0; k < 3; ++k)
    CHECK(n2.at("cosets")[k].at("norm").get<double>() ==
          doctest::Approx(2.0 * n1.at("cosets")[k].at("norm").get<double>()).epsilon(1e-9));

  const std::string is = "/tmp/bergman_cli_is";
  REQUIRE(run_cli({"interp-solve", "--scheme", sch + ".json", "--out", is}) == cli::kOk);
  const json sol = load_json(is + ".json");
  CHECK(sol.at("residual_max").get<double>() < 1e-9);
  CHECK(sol.at("K_estimate").get<double>() > 0.0);
  CHECK(sol.at("converged").get<bool>());
}

TEST_CASE("dbar solve writes a loadable grid and honors the residual gate") {
  const std::string out = "/tmp/bergman_cli_db";
  REQUIRE(run_cli({"dbar-solve", "--points", "none", "--grid-n", "65", "--out", out}) ==
          cli::kOk);

  const GridFunction u = load_grid_csv(out + ".csv");  // manifest comment is skipped
  CHECK(u.n == 65);
  CHECK(u.r_max == doctest::Approx(0.8));

  const json rep = load_json(out + ".json");
  CHECK(rep.at("residual_rel").get<double>() < 5e-2);
  CHECK(rep.at("charts").get<int>() == 1);
  CHECK(rep.at("converged").get<bool>());

  // an unreachable gate flips the exit code but still writes diagnostics
  const std::string gated = "/tmp/bergman_cli_dbg";
  CHECK(run_cli({"dbar-solve", "--points", "none", "--grid-n", "65", "--tol", "1e-12",
                 "--out", gated}) == cli::kNoConvergence);
  CHECK_FALSE(load_json(gated + ".json").at("converged").get<bool>());
}

TEST_CASE("zeroset-norm and oi-check report finite summaries") {
  const std::string zs = "/tmp/bergman_cli_zs";
  REQUIRE(run_cli({"zeroset-norm", "--points", "lattice:0.8:0.9", "--out", zs}) == cli::kOk);
  const json zn = load_json(zs + ".json");
  CHECK(zn.at("value").get<double>() > 0.0);
  CHECK(zn.at("outer_share").get<double>() < 0.5);

  const std::string oi = "/tmp/bergman_cli_oi";
  REQUIRE(run_cli({"oi-check", "--points", "lattice:0.7:0.8", "--out", oi}) == cli::kOk);
  const json os = load_json(oi + ".json");
  CHECK(os.at("finiteness_sum").get<double>() > 0.0);
  CHECK(os.at("delta").size() == os.at("local_count").size());
  CHECK(os.at("coset_norms").size() == os.at("pairs").get<std::size_t>());
}

TEST_CASE("random inputs are seeded and reproducible") {
  auto body = [&](const std::string& out, const std::string& seed) {
    REQUIRE(run_cli({"density", "--points", "random:20:0.95", "--seed", seed, "--a-spacing",
                     "0.5", "--r-grid", "0.9", "--out", out}) == cli::kOk);
    return csv_body(slurp(out + ".csv"));
  };
  const std::string r1 = body("/tmp/bergman_cli_r1", "7");
  const std::string r2 = body("/tmp/bergman_cli_r2", "7");
  const std::string r3 = body("/tmp/bergman_cli_r3", "8");
  CHECK(r1 == r2);
  CHECK(r1 != r3);
}

TEST_CASE("the binary maps outcomes to its exit codes") {
  spit("/tmp/bergman_cli_binbad.json", "{ nope");
  CHECK(run_binary("--help > /dev/null") == cli::kOk);
  CHECK(run_binary("density --points lattice:0.6:0.95 --a-spacing 0.6 --r-grid 0.9 "
                   "--out /tmp/bergman_cli_bin > /dev/null 2>&1") == cli::kOk);
  CHECK(run_binary("--config /tmp/bergman_cli_binbad.json 2> /dev/null") == cli::kConfigError);
  CHECK(run_binary("scheme-check --scheme /tmp/bergman_cli_nowhere.json 2> /dev/null") ==
        cli::kIoError);
}

}  // TEST_SUITE
