#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fsnet/cli.hpp"

using namespace fsnet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// first number following `key` in `text`; fails the test when absent
double number_after(const std::string& text, const std::string& key) {
  const size_t hit = text.find(key);
  REQUIRE(hit != std::string::npos);
  return std::strtod(text.c_str() + hit + key.size(), nullptr);
}

fs::path fresh_dir(const std::string& leaf) {
  const fs::path p = fs::temp_directory_path() / "fsnet_cli_tests" / leaf;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(std::initializer_list<const char*> args) {
  std::vector<const char*> v(args);
  return run_cli(int(v.size()), v.data());
}

RunPlan plan_from(const std::string& text, const fs::path& outdir) {
  RunConfig cfg = parse_config(text);
  cfg.outdir = outdir.string();
  return materialize(cfg);
}

const std::string inline_nonsym_cfg =
    "version=1\n"
    "emit=trajectory summary\n"
    "\n"
    "[graph]\n"
    "nodes=3\n"
    "edge=1 3 2\n"
    "edge=2 3 1\n"
    "dynamic_edge=1 2\n"
    "\n"
    "[weight]\n"
    "w_star=0\n"
    "alpha1=2\n"
    "alpha2=1\n"
    "\n"
    "[drift]\n"
    "kind=constant\n"
    "\n"
    "[run]\n"
    "epsilon=0.05\n"
    "x0=-1.5 -1 2.5\n"
    "y0=0.5\n"
    "dt=0.001\n"
    "t_end=80\n"
    "method=euler\n";

}  // namespace

TEST_CASE("config parser: happy path, comments and overrides") {
  const RunConfig cfg = parse_config(
      "# minimal preset request\n"
      "version=1\n"
      "preset = triangle_y19   # trailing comment\n"
      "outdir=results\n"
      "emit=trajectory summary\n"
      "\n"
      "[run]\n"
      "dt=0.01\n"
      "dt=0.002\n"  // later key wins
      "y0=1.0\n");
  REQUIRE(cfg.preset_name.has_value());
  CHECK(*cfg.preset_name == "triangle_y19");
  CHECK(cfg.outdir == "results");
  CHECK(cfg.emit == std::vector<std::string>{"trajectory", "summary"});
  REQUIRE(cfg.dt.has_value());
  CHECK(*cfg.dt == 0.002);
  CHECK(*cfg.y0 == 1.0);

  const RunConfig inl = parse_config(inline_nonsym_cfg);
  CHECK_FALSE(inl.preset_name.has_value());
  CHECK(inl.nodes == 3);
  CHECK(inl.edges.size() == 2);
  CHECK(inl.edges[0].i == 0);  // stored 0-based
  CHECK(inl.edges[0].j == 2);
  CHECK(inl.edges[0].w == 2.0);
  REQUIRE(inl.dynamic_edge.has_value());
  CHECK(inl.dynamic_edge->first == 0);
  CHECK(inl.dynamic_edge->second == 1);
  CHECK(inl.alpha1 == 2.0);
  CHECK(inl.uses_y);
  REQUIRE(inl.x0.has_value());
  CHECK(inl.x0->size() == 3);
}

TEST_CASE("config parser: errors carry line and column") {
  auto error_at = [](const std::string& text, int line, int column) {
    try {
      parse_config(text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() == column);
      CHECK(std::string(e.what()).find("line " + std::to_string(line)) !=
            std::string::npos);
    }
  };

  error_at("preset=triangle_y19\n", 1, 1);            // missing version
  error_at("version=2\npreset=x\n", 1, 9);            // unsupported version
  error_at("version=1\npreset=a\n  bad line\n", 3, 3);  // no key=value
  error_at("version=1\n[run]\ndt=abc\n", 3, 4);         // value not a number

  CHECK_THROWS_AS(parse_config("version=1\n[orbit]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[run\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\nwaffles=1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\npreset=\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\nemit=waffles\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[graph]\nnodes=2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[graph]\nedge=1 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[graph]\nedge=0 1 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[graph]\nnodes=3.5\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[weight]\nuses_y=maybe\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[drift]\nkind=cubic\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[run]\nrecord_stride=0\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[run]\nmethod=verlet\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[run]\nspeed=11\n"), ConfigError);

  // exactly one model source
  CHECK_THROWS_AS(parse_config("version=1\npreset=x\n[graph]\nnodes=3\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("version=1\n[run]\ndt=0.01\n"), ConfigError);
}

TEST_CASE("materialize: preset overrides and inline construction") {
  RunConfig cfg = parse_config("version=1\npreset=triangle_y19\n");
  RunPlan plan = materialize(cfg);
  CHECK(plan.scenario.name == "triangle_y19");
  CHECK_FALSE(plan.use_canard_aware);
  CHECK(plan.emit.size() == 4);  // defaults to every artifact

  cfg.dt = 1e-4;
  cfg.y0 = 1.5;
  cfg.method = "canard_aware";
  cfg.x0 = std::vector<double>{1.0, 0.0, -1.0};
  plan = materialize(cfg);
  CHECK(plan.scenario.cfg.dt == 1e-4);
  CHECK(plan.scenario.ic.y == 1.5);
  CHECK(plan.scenario.ic.x[2] == -1.0);
  CHECK(plan.scenario.cfg.method == Method::ForwardEuler);
  CHECK(plan.use_canard_aware);

  cfg.method = "rk4";
  CHECK(materialize(cfg).scenario.cfg.method == Method::RK4);
  CHECK_FALSE(materialize(cfg).use_canard_aware);

  cfg.x0 = std::vector<double>{1.0, 0.0};  // wrong length for the triangle
  CHECK_THROWS_AS(materialize(cfg), std::invalid_argument);
  cfg.x0.reset();
  cfg.dt = 0.7;  // violates the integrator stability precondition
  CHECK_THROWS_AS(materialize(cfg), std::invalid_argument);

  // a preset that prefers the handover integrator keeps it by default
  RunConfig cub = parse_config("version=1\npreset=periodic_cubic\n");
  CHECK(materialize(cub).use_canard_aware);
  cub.method = "euler";
  CHECK_FALSE(materialize(cub).use_canard_aware);

  const RunPlan inl = plan_from(inline_nonsym_cfg, "unused");
  CHECK(inl.scenario.name == "inline");
  CHECK(inl.scenario.model.graph.node_count() == 3);
  CHECK(inl.scenario.model.weight.nu() == 1.0);
  CHECK(inl.scenario.model.epsilon == 0.05);
  CHECK(inl.scenario.ic.y == 0.5);
  CHECK(inl.scenario.cfg.t_end == 80.0);
  CHECK(inl.emit == std::vector<std::string>{"trajectory", "summary"});
  CHECK(inl.scenario.expectations.empty());

  CHECK_THROWS_AS(
      materialize(parse_config("version=1\n[graph]\nnodes=3\n"
                               "dynamic_edge=1 2\n")),
      std::invalid_argument);  // x0 missing
  CHECK_THROWS_AS(
      materialize(parse_config("version=1\n[graph]\nnodes=3\n"
                               "[run]\nx0=1 2 3\n")),
      std::invalid_argument);  // dynamic edge missing
  CHECK_THROWS_AS(
      materialize(parse_config("version=1\n[graph]\ndynamic_edge=1 2\n"
                               "[run]\nx0=1 2 3\n")),
      std::invalid_argument);  // nodes missing
}

TEST_CASE("maps command evaluates the analytic passage formulas") {
  std::ostringstream out, err;
  MapsRequest req;

  SUBCASE("pi2 crossing with flow cross-check") {
    req.map = "pi2";
    req.a = 0.5;
    req.delta = 1.0;
    req.nu = 1.0;
    REQUIRE(cmd_maps(req, out, err) == 0);
    CHECK(number_after(out.str(), "pi2 exit: a=") ==
          doctest::Approx(0.24082933757501479).epsilon(1e-15));
    CHECK(number_after(out.str(), " y=") == -1.0);
    CHECK(number_after(out.str(), "flow cross-check residual: ") < 1e-8);
  }

  SUBCASE("pi2 divergence reports the asymptote") {
    req.map = "pi2";
    req.a = -0.5;
    REQUIRE(cmd_maps(req, out, err) == 0);
    CHECK(out.str().find("no crossing") != std::string::npos);
    const double y = number_after(out.str(), "diverges at y = ");
    CHECK(y > -1.0);
    CHECK(y < 0.0);
    CHECK(number_after(out.str(), "asymptote-equation residual: ") < 1e-12);
  }

  SUBCASE("gamma2 asymptote and its domain guard") {
    req.map = "gamma2";
    req.a = -0.5;
    REQUIRE(cmd_maps(req, out, err) == 0);
    CHECK(number_after(out.str(), "gamma2: y = ") < 0.0);
    CHECK(number_after(out.str(), "asymptote-equation residual: ") < 1e-12);

    req.a = 0.5;  // wrong side: no blow-up from a positive entry
    CHECK(cmd_maps(req, out, err) == 1);
    CHECK(err.str().find("domain violation:") != std::string::npos);
  }

  SUBCASE("pi1 exit and the pole inside the entry passage") {
    req.map = "pi1";
    req.a = 0.0;
    req.eps = 0.2;
    req.mu = 1.0;
    REQUIRE(cmd_maps(req, out, err) == 0);
    CHECK(number_after(out.str(), "pi1 exit: a=") == 0.0);
    CHECK(number_after(out.str(), " r=") ==
          doctest::Approx(std::sqrt(0.2)).epsilon(1e-15));

    req.a = -2.0;  // nu*a1 + 1 = -1 < 0 with a long passage: pole hit
    CHECK(cmd_maps(req, out, err) == 1);
    CHECK(err.str().find("pi1 ill-defined") != std::string::npos);
  }

  SUBCASE("chart changes report a zero round trip") {
    req.map = "charts";
    req.chart = "k12";
    req.a = 0.3;
    req.b = -0.2;
    req.c = 0.1;
    req.eps = 0.04;
    req.r = 0.5;
    REQUIRE(cmd_maps(req, out, err) == 0);
    CHECK(number_after(out.str(), "k12: a=") ==
          doctest::Approx(1.5).epsilon(1e-15));
    CHECK(number_after(out.str(), " b=") == -1.0);
    CHECK(number_after(out.str(), " c=") == 0.5);
    CHECK(number_after(out.str(), " y=") == 5.0);
    CHECK(number_after(out.str(), " r=") ==
          doctest::Approx(0.1).epsilon(1e-15));
    CHECK(number_after(out.str(), "round-trip residual: ") < 1e-12);

    req.chart = "k99";
    CHECK(cmd_maps(req, out, err) == 2);
  }

  SUBCASE("unknown map name") {
    req.map = "escher";
    CHECK(cmd_maps(req, out, err) == 2);
    CHECK(err.str().find("unknown map") != std::string::npos);
  }
}

TEST_CASE("run command: artifacts, reruns and failure signalling") {
  unsetenv("FSNET_OUTDIR");
  const fs::path dir = fresh_dir("run_y19");
  std::ostringstream out, err;
  const RunPlan plan =
      plan_from("version=1\npreset=triangle_y19\n", dir);
  REQUIRE(cmd_run(plan, out, err) == 0);
  CHECK(err.str().empty());
  CHECK(out.str().find("scenario: triangle_y19") != std::string::npos);
  CHECK(out.str().find("ok 1 - reaches_consensus") != std::string::npos);
  CHECK(out.str().find("slow-limit geometry (triangle):") !=
        std::string::npos);
  for (const char* f : {"trajectory.csv", "report.txt", "summary.json",
                        "plotdata/nodes.csv", "plotdata/weight.csv",
                        "plotdata/phase_plane.csv"})
    CHECK(fs::exists(dir / f));
  CHECK(slurp(dir / "summary.json").find("\"pass\": true") !=
        std::string::npos);
  CHECK(slurp(dir / "report.txt").find("not ok") == std::string::npos);

  // byte-identical rerun into a second directory
  const fs::path dir2 = fresh_dir("run_y19_again");
  std::ostringstream out2, err2;
  REQUIRE(cmd_run(plan_from("version=1\npreset=triangle_y19\n", dir2), out2,
                  err2) == 0);
  CHECK(slurp(dir / "trajectory.csv") == slurp(dir2 / "trajectory.csv"));
  CHECK(slurp(dir / "summary.json") == slurp(dir2 / "summary.json"));

  // a window too short for clustering turns the exit code nonzero
  const fs::path dir3 = fresh_dir("run_y19_short");
  std::ostringstream out3, err3;
  CHECK(cmd_run(plan_from("version=1\npreset=triangle_y19\n[run]\nt_end=40\n",
                          dir3),
                out3, err3) == 1);
  CHECK(err3.str().find("failed checks: reaches_clustering") !=
        std::string::npos);
  CHECK(slurp(dir3 / "summary.json").find("\"pass\": false") !=
        std::string::npos);
}

TEST_CASE("compare command runs the three integrators side by side") {
  unsetenv("FSNET_OUTDIR");
  const fs::path dir = fresh_dir("compare_y19");
  std::ostringstream out, err;
  const RunPlan plan =
      plan_from("version=1\npreset=triangle_y19\n[run]\nt_end=40\n", dir);
  REQUIRE(cmd_compare(plan, out, err) == 0);
  CHECK(out.str().find("scenario: triangle_y19") != std::string::npos);

  const std::string csv = slurp(dir / "compare.csv");
  CHECK(csv.rfind("method,", 0) == 0);
  for (const char* label : {"\neuler,", "\nrk4,", "\ncanard_aware,"})
    CHECK(csv.find(label) != std::string::npos);
  CHECK(fs::exists(dir / "compare.txt"));
}

TEST_CASE("analyze command reports the critical weight without integrating") {
  unsetenv("FSNET_OUTDIR");
  const fs::path dir = fresh_dir("analyze_nonsym");
  std::ostringstream out, err;
  REQUIRE(cmd_analyze(plan_from("version=1\npreset=triangle_nonsym\n", dir),
                      out, err) == 0);
  const std::string txt = slurp(dir / "analysis.txt");
  CHECK(number_after(txt, "critical dynamic-edge weight w*: ") ==
        doctest::Approx(-2.0 / 3.0).epsilon(1e-9));
  CHECK(number_after(txt, "stability ratio: ") ==
        doctest::Approx(-1.25).epsilon(1e-12));
  CHECK(txt.find("kernel dimension at w*: 2") != std::string::npos);
  CHECK(slurp(dir / "analysis.json").find("\"stability_ratio\": -1.25") !=
        std::string::npos);

  // non-triangle geometry: the slow-limit section is declared out of scope
  const fs::path dir2 = fresh_dir("analyze_ring");
  std::ostringstream out2, err2;
  REQUIRE(cmd_analyze(plan_from("version=1\npreset=ring(7)\n", dir2), out2,
                      err2) == 0);
  const std::string ring_txt = slurp(dir2 / "analysis.txt");
  CHECK(number_after(ring_txt, "critical dynamic-edge weight w*: ") ==
        doctest::Approx(-1.0 / 6.0).epsilon(1e-9));
  CHECK(ring_txt.find("manifold report omitted") != std::string::npos);
  CHECK(slurp(dir2 / "analysis.json").find("stability_ratio") ==
        std::string::npos);
}

TEST_CASE("FSNET_OUTDIR overrides the configured output directory") {
  const fs::path env_dir = fresh_dir("env_override");
  const fs::path cfg_dir = fresh_dir("env_configured");
  setenv("FSNET_OUTDIR", env_dir.string().c_str(), 1);
  std::ostringstream out, err;
  REQUIRE(cmd_analyze(plan_from("version=1\npreset=triangle_y19\n", cfg_dir),
                      out, err) == 0);
  unsetenv("FSNET_OUTDIR");
  CHECK(fs::exists(env_dir / "analysis.txt"));
  CHECK_FALSE(fs::exists(cfg_dir / "analysis.txt"));
}

TEST_CASE("argv entry point: exit codes for every outcome class") {
  unsetenv("FSNET_OUTDIR");
  CHECK(cli({"fsnet", "presets"}) == 0);
  CHECK(cli({"fsnet", "--help"}) == 0);
  CHECK(cli({"fsnet"}) == 2);                       // missing subcommand
  CHECK(cli({"fsnet", "run"}) == 2);                // no scenario source
  CHECK(cli({"fsnet", "run", "--preset", "nope"}) == 2);
  CHECK(cli({"fsnet", "run", "--preset", "a", "--config", "b"}) == 2);
  CHECK(cli({"fsnet", "run", "--preset", "triangle_y19", "--integrator",
             "verlet"}) == 2);
  CHECK(cli({"fsnet", "maps", "gamma2", "--a", "-0.5"}) == 0);
  CHECK(cli({"fsnet", "maps", "escher"}) == 2);

  // end-to-end: the symmetric trap keeps plain euler on consensus (failed
  // clustering check), while the handover integrator completes the story
  const fs::path dir = fresh_dir("argv_y20");
  const std::string dirs = dir.string();
  CHECK(cli({"fsnet", "run", "--preset", "triangle_y20", "--integrator",
             "euler", "--outdir", dirs.c_str()}) == 1);
  CHECK(cli({"fsnet", "run", "--preset", "triangle_y20", "--integrator",
             "canard_aware", "--outdir", dirs.c_str()}) == 0);
  CHECK(fs::exists(dir / "summary.json"));

  // config-file path: write, load, run
  const fs::path cfg_dir = fresh_dir("argv_config");
  const fs::path cfg_file = cfg_dir / "run.cfg";
  std::ofstream(cfg_file) << "outdir=" << cfg_dir.string() << "\n"
                          << inline_nonsym_cfg;
  const std::string cfgs = cfg_file.string();
  CHECK(cli({"fsnet", "analyze", "--config", cfgs.c_str()}) == 0);
  CHECK(fs::exists(cfg_dir / "analysis.txt"));
  CHECK(cli({"fsnet", "analyze", "--config", "/no/such/file.cfg"}) == 1);
}
