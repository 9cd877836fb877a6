#include "fsnet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "fsnet/blowup.hpp"
#include "fsnet/dynamics.hpp"
#include "fsnet/network.hpp"
#include "fsnet/specfun.hpp"

namespace fsnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path resolve_outdir(const std::string& configured) {
  if (const char* env = std::getenv("FSNET_OUTDIR"); env && *env)
    return fs::path(env);
  return fs::path(configured);
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
}

std::string integrator_label(const Scenario& s, bool canard) {
  if (canard) return "canard_aware";
  return s.cfg.method == Method::ForwardEuler ? "euler" : "rk4";
}

// split of the dynamic-edge pair, the quantity the clustering checks watch
double pair_split(const Sample& smp) {
  return std::abs(smp.state.x[0] - smp.state.x[1]);
}

std::string manifold_section(const ModelParams& m, double sigma0) {
  std::ostringstream os;
  if (m.graph.node_count() != 3) {
    os << "manifold report omitted: the slow-limit geometry is implemented "
          "for the triangle graph only\n";
    return os.str();
  }
  const SingularReport rep = singular_analysis(m, sigma0);
  os << "slow-limit geometry (triangle):\n";
  os << "  nu = alpha1 - alpha2 = " << g17(rep.nu) << "\n";
  if (rep.clustering_present) {
    os << "  clustering manifold present (nu > 0)\n";
  } else {
    os << "  clustering manifold absent (nu=0); symmetric passage regime\n";
  }
  os << "  sigma0 = " << g17(rep.sigma0) << "\n";
  os << "  non-hyperbolic point: x = (" << g17(rep.p_x[0]) << ", "
     << g17(rep.p_x[1]) << ", " << g17(rep.p_x[2]) << "), y = " << g17(rep.p_y)
     << "\n";
  os << "  critical dynamic-edge weight: " << g17(rep.w_star_graph) << "\n";
  os << "  consensus-branch eigenvalue slope in y: " << g17(rep.lambda_n_slope)
     << "\n";
  os << "  clustering-branch eigenvalue slope in y: "
     << g17(rep.lambda_m_slope) << "\n";
  os << "  clustering/consensus stability ratio: "
     << g17(rep.clustering_ratio) << "\n";
  return os.str();
}

}  // namespace

int cmd_run(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  const Scenario& s = plan.scenario;
  const fs::path outdir = resolve_outdir(plan.outdir);
  fs::create_directories(outdir);

  const ScenarioRun run = run_scenario(s, plan.use_canard_aware);
  const auto& tr = run.trajectory;
  const std::string integ = integrator_label(s, plan.use_canard_aware);

  auto wants = [&](const char* what) {
    return std::find(plan.emit.begin(), plan.emit.end(), what) !=
           plan.emit.end();
  };

  if (wants("trajectory")) {
    std::ofstream f(outdir / "trajectory.csv");
    if (!f) throw std::runtime_error("cannot write trajectory.csv");
    write_trajectory_csv(tr, f);
  }

  std::ostringstream report;
  report << "scenario: " << s.name << "\n";
  report << "integrator: " << integ << "\n";
  report << tap_report(run.checks);
  if (tr.switch_time)
    report << "switch_time: " << g17(*tr.switch_time) << "\n";
  if (tr.aborted) report << "aborted: " << tr.error << "\n";
  if (!tr.samples.empty()) {
    const Sample& last = tr.samples.back();
    report << "final: t=" << g17(last.state.t) << " y=" << g17(last.state.y)
           << " w=" << g17(last.w) << " split=" << g17(pair_split(last))
           << "\n";
  }
  report << manifold_section(s.model, (2.0 / 3.0) * s.ic.x.sum());
  if (wants("report")) write_file(outdir / "report.txt", report.str());
  out << report.str();

  if (wants("plotdata")) {
    fs::create_directories(outdir / "plotdata");
    const int m = s.model.graph.node_count();
    std::ostringstream nodes, weight, phase;
    nodes << "t";
    for (int i = 1; i <= m; ++i) nodes << ",x" << i;
    nodes << "\n";
    weight << "t,w\n";
    phase << "a,y\n";
    for (const Sample& smp : tr.samples) {
      nodes << g17(smp.state.t);
      for (int i = 0; i < m; ++i) nodes << "," << g17(smp.state.x[i]);
      nodes << "\n";
      weight << g17(smp.state.t) << "," << g17(smp.w) << "\n";
      phase << g17(smp.state.x[0]) << "," << g17(smp.state.y) << "\n";
    }
    write_file(outdir / "plotdata" / "nodes.csv", nodes.str());
    write_file(outdir / "plotdata" / "weight.csv", weight.str());
    write_file(outdir / "plotdata" / "phase_plane.csv", phase.str());
  }

  bool all_pass = true;
  for (const CheckResult& c : run.checks) all_pass = all_pass && c.pass;

  if (wants("summary")) {
    json j;
    j["scenario"] = s.name;
    j["integrator"] = integ;
    j["pass"] = all_pass;
    j["aborted"] = tr.aborted;
    j["checks"] = json::array();
    for (const CheckResult& c : run.checks)
      j["checks"].push_back(
          {{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}});
    if (tr.switch_time)
      j["switch_time"] = *tr.switch_time;
    else
      j["switch_time"] = nullptr;
    if (!tr.samples.empty()) {
      const Sample& last = tr.samples.back();
      j["final"] = {{"t", last.state.t},
                    {"y", last.state.y},
                    {"w", last.w},
                    {"split", pair_split(last)}};
    }
    write_file(outdir / "summary.json", j.dump(2) + "\n");
  }

  if (!all_pass) {
    err << "failed checks:";
    for (const CheckResult& c : run.checks)
      if (!c.pass) err << " " << c.name;
    err << "\n";
  }
  return all_pass ? 0 : 1;
}

int cmd_compare(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  const fs::path outdir = resolve_outdir(plan.outdir);
  fs::create_directories(outdir);

  struct Row {
    std::string method;
    Trajectory tr;
  };
  std::array<Row, 3> rows = {
      Row{"euler", {}}, Row{"rk4", {}}, Row{"canard_aware", {}}};
  std::array<std::exception_ptr, 3> errors{};

  auto worker = [&](int idx) {
    try {
      Scenario s = plan.scenario;
      bool canard = false;
      if (idx == 0) s.cfg.method = Method::ForwardEuler;
      if (idx == 1) s.cfg.method = Method::RK4;
      if (idx == 2) {
        s.cfg.method = Method::ForwardEuler;
        canard = true;
      }
      rows[idx].tr = run_scenario(s, canard).trajectory;
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };
  std::array<std::thread, 3> pool = {std::thread(worker, 0),
                                     std::thread(worker, 1),
                                     std::thread(worker, 2)};
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  std::ostringstream csv, txt;
  csv << "method,max_split_y_below_-1,switch_time,final_t,final_y,final_w,"
         "final_split,aborted\n";
  txt << "method          max split (y < -1)   switch t   final split   "
         "final y\n";
  bool all_ok = true;
  for (const Row& r : rows) {
    double max_split = 0.0;
    for (const Sample& smp : r.tr.samples)
      if (smp.state.y < -1.0) max_split = std::max(max_split, pair_split(smp));
    const Sample& last = r.tr.samples.back();
    const std::string sw =
        r.tr.switch_time ? g17(*r.tr.switch_time) : std::string();
    csv << r.method << "," << g17(max_split) << "," << sw << ","
        << g17(last.state.t) << "," << g17(last.state.y) << "," << g17(last.w)
        << "," << g17(pair_split(last)) << "," << (r.tr.aborted ? 1 : 0)
        << "\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-15s %-20.6g %-10s %-13.6g %-10.6g\n",
                  r.method.c_str(), max_split, sw.empty() ? "-" : sw.c_str(),
                  pair_split(last), last.state.y);
    txt << line;
    if (r.tr.aborted) {
      all_ok = false;
      err << r.method << " aborted: " << r.tr.error << "\n";
    }
  }
  write_file(outdir / "compare.csv", csv.str());
  write_file(outdir / "compare.txt", txt.str());
  out << "scenario: " << plan.scenario.name << "\n" << txt.str();
  return all_ok ? 0 : 1;
}

int cmd_analyze(const RunPlan& plan, std::ostream& out, std::ostream&) {
  const Scenario& s = plan.scenario;
  const ModelParams& m = s.model;
  const fs::path outdir = resolve_outdir(plan.outdir);
  fs::create_directories(outdir);

  const CriticalMode cm = critical_weight_numeric(m.graph);
  // spectrum with the dynamic edge frozen at the critical weight
  const DynamicWeight frozen(cm.w_star, 0.0, 0.0, std::nullopt, false);
  const Eigen::MatrixXd L = build_laplacian(
      m.graph, frozen, Eigen::VectorXd::Zero(m.graph.node_count()), 0.0);
  const SpectrumReport spec = laplacian_spectrum(L);

  std::ostringstream txt;
  txt << "model: " << s.name << "\n";
  txt << "nodes: " << m.graph.node_count() << "\n";
  txt << "weight: w_star=" << g17(m.weight.w_star)
      << " alpha1=" << g17(m.weight.alpha1)
      << " alpha2=" << g17(m.weight.alpha2) << " nu=" << g17(m.weight.nu())
      << "\n";
  txt << "critical dynamic-edge weight w*: " << g17(cm.w_star) << "\n";
  txt << "spectrum at w*:";
  for (int i = 0; i < spec.eigenvalues.size(); ++i)
    txt << " " << g17(spec.eigenvalues[i]);
  txt << "\n";
  txt << "kernel dimension at w*: " << spec.kernel_dim << "\n";
  txt << manifold_section(m, (2.0 / 3.0) * s.ic.x.sum());
  write_file(outdir / "analysis.txt", txt.str());
  out << txt.str();

  json j;
  j["model"] = s.name;
  j["nodes"] = m.graph.node_count();
  j["w_star"] = cm.w_star;
  j["kernel_dim_at_w_star"] = spec.kernel_dim;
  j["eigenvalues_at_w_star"] = json::array();
  for (int i = 0; i < spec.eigenvalues.size(); ++i)
    j["eigenvalues_at_w_star"].push_back(spec.eigenvalues[i]);
  j["nu"] = m.weight.nu();
  if (m.graph.node_count() == 3) {
    const SingularReport rep =
        singular_analysis(m, (2.0 / 3.0) * s.ic.x.sum());
    j["clustering_manifold_present"] = rep.clustering_present;
    j["sigma0"] = rep.sigma0;
    j["p"] = {{"x", {rep.p_x[0], rep.p_x[1], rep.p_x[2]}}, {"y", rep.p_y}};
    j["lambda_consensus_slope"] = rep.lambda_n_slope;
    j["lambda_clustering_slope"] = rep.lambda_m_slope;
    j["stability_ratio"] = rep.clustering_ratio;
  }
  write_file(outdir / "analysis.json", j.dump(2) + "\n");
  return 0;
}

namespace {

// numerically integrated passage of the rescaled planar system from
// (a, +delta2) to the exit section {y = -delta2}: RK4 on da/dy = 2(y+nu a)a
// with y as the integration variable (the slow coordinate decreases at unit
// rate, so this is the orbit itself, not an approximation of time)
double pi2_numeric(double a, double delta2, double nu) {
  const int n = std::max(1, int(std::llround(2.0 * delta2 / 1e-4)));
  const double h = -2.0 * delta2 / n;
  double y = delta2;
  auto f = [&](double yy, double aa) { return 2.0 * (yy + nu * aa) * aa; };
  for (int k = 0; k < n; ++k) {
    const double k1 = f(y, a);
    const double k2 = f(y + 0.5 * h, a + 0.5 * h * k1);
    const double k3 = f(y + 0.5 * h, a + 0.5 * h * k2);
    const double k4 = f(y + h, a + h * k3);
    a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    y += h;
  }
  return a;
}

int maps_pi1(const MapsRequest& req, std::ostream& out, std::ostream& err) {
  const TransitionResult res =
      pi1_map(req.a, req.delta, req.eps, req.mu, req.nu);
  if (res.status == TransitionStatus::IllDefined) {
    err << "pi1 ill-defined: the denominator nu*a1*exp(-2T) - (nu*a1 + 1) "
           "vanishes before the exit section (requires nu*a1 + 1 < 0)\n";
    return 1;
  }
  out << "pi1 exit: a=" << g17(res.exit.a) << " r=" << g17(res.exit.r)
      << " eps=" << g17(res.exit.y_or_eps) << "\n";
  return 0;
}

int maps_pi2(const MapsRequest& req, std::ostream& out, std::ostream& err) {
  if (req.delta <= 0.0) {
    err << "pi2 requires delta > 0\n";
    return 1;
  }
  const TransitionResult res = pi2_map(req.r, req.a, req.delta, req.nu);
  if (res.status == TransitionStatus::BlownUpAtAsymptote) {
    const double g2 = res.gamma2;
    const double lhs = std::exp(g2 * g2) * dawson(g2);
    const double s = 2.0 * req.a * req.nu;
    const double c0 =
        std::exp(req.delta * req.delta) * (1.0 / s + dawson(req.delta));
    out << "pi2: no crossing; orbit diverges at y = " << g17(g2) << "\n";
    out << "asymptote-equation residual: "
        << g17(std::abs(lhs - c0) / std::max(1.0, std::abs(c0))) << "\n";
    return 0;
  }
  const double numeric = pi2_numeric(req.a, req.delta, req.nu);
  out << "pi2 exit: a=" << g17(res.exit.a) << " y=" << g17(res.exit.y_or_eps)
      << " r=" << g17(res.exit.r) << "\n";
  out << "flow cross-check residual: " << g17(std::abs(res.exit.a - numeric))
      << "\n";
  return 0;
}

int maps_gamma2(const MapsRequest& req, std::ostream& out, std::ostream&) {
  const double g2 = gamma2_asymptote(req.a, req.delta, req.nu);
  const double lhs = std::exp(g2 * g2) * dawson(g2);
  const double s = 2.0 * req.a * req.nu;
  const double c0 =
      std::exp(req.delta * req.delta) * (1.0 / s + dawson(req.delta));
  out << "gamma2: y = " << g17(g2) << "\n";
  out << "asymptote-equation residual: "
      << g17(std::abs(lhs - c0) / std::max(1.0, std::abs(c0))) << "\n";
  return 0;
}

int maps_charts(const MapsRequest& req, std::ostream& out, std::ostream& err) {
  ChartMapKind kind;
  ChartMapKind inverse;
  ChartId source;
  if (req.chart == "k12") {
    kind = ChartMapKind::k12;
    inverse = ChartMapKind::k21;
    source = ChartId::K1;
  } else if (req.chart == "k21") {
    kind = ChartMapKind::k21;
    inverse = ChartMapKind::k12;
    source = ChartId::K2;
  } else if (req.chart == "k32") {
    kind = ChartMapKind::k32;
    inverse = ChartMapKind::k23;
    source = ChartId::K3;
  } else if (req.chart == "k23") {
    kind = ChartMapKind::k23;
    inverse = ChartMapKind::k32;
    source = ChartId::K2;
  } else {
    err << "charts needs --chart k12|k21|k32|k23\n";
    return 2;
  }
  const ChartPoint p{source, req.a, req.b, req.c,
                     (req.chart == "k21" || req.chart == "k23") ? req.y
                                                                : req.eps,
                     req.r};
  const ChartPoint q = chart_map(kind, p);
  const ChartPoint back = chart_map(inverse, q);
  const double rt = std::max({std::abs(back.a - p.a), std::abs(back.b - p.b),
                              std::abs(back.c - p.c),
                              std::abs(back.y_or_eps - p.y_or_eps),
                              std::abs(back.r - p.r)});
  out << req.chart << ": a=" << g17(q.a) << " b=" << g17(q.b)
      << " c=" << g17(q.c)
      << ((req.chart == "k12" || req.chart == "k32") ? " y=" : " eps=")
      << g17(q.y_or_eps) << " r=" << g17(q.r) << "\n";
  out << "round-trip residual: " << g17(rt) << "\n";
  return 0;
}

}  // namespace

int cmd_maps(const MapsRequest& req, std::ostream& out, std::ostream& err) {
  try {
    if (req.map == "pi1") return maps_pi1(req, out, err);
    if (req.map == "pi2") return maps_pi2(req, out, err);
    if (req.map == "gamma2") return maps_gamma2(req, out, err);
    if (req.map == "charts") return maps_charts(req, out, err);
    err << "unknown map '" << req.map << "' (pi1|pi2|gamma2|charts)\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "domain violation: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "fsnet: simulation and analysis of fast-slow consensus networks with "
      "one state-dependent edge"};
  app.require_subcommand(1);

  std::string config_path, preset_name, integrator, outdir_flag;

  auto add_source_opts = [&](CLI::App* sub, bool with_integrator) {
    sub->add_option("--config", config_path,
                    "run-config file (see README for the grammar)");
    sub->add_option("--preset", preset_name,
                    "preset scenario name (see 'presets')");
    sub->add_option("--outdir", outdir_flag,
                    "output directory (FSNET_OUTDIR overrides)");
    if (with_integrator)
      sub->add_option("--integrator", integrator,
                      "euler | rk4 | canard_aware")
          ->check(CLI::IsMember({"euler", "rk4", "canard_aware"}));
  };

  CLI::App* c_run = app.add_subcommand(
      "run", "simulate a scenario; writes trajectory.csv, report.txt, "
             "plotdata/, summary.json");
  add_source_opts(c_run, true);
  CLI::App* c_cmp = app.add_subcommand(
      "compare",
      "run the same scenario under euler, rk4 and the canard-aware "
      "integrator; writes compare.csv/compare.txt");
  add_source_opts(c_cmp, false);
  CLI::App* c_ana = app.add_subcommand(
      "analyze", "no integration: critical weight, spectrum and slow-limit "
                 "geometry; writes analysis.txt/analysis.json");
  add_source_opts(c_ana, false);

  MapsRequest mreq;
  CLI::App* c_maps = app.add_subcommand(
      "maps", "evaluate the analytic transition maps and chart changes");
  c_maps->add_option("map", mreq.map, "pi1 | pi2 | gamma2 | charts")
      ->required();
  c_maps->add_option("--a", mreq.a, "fast coordinate at entry");
  c_maps->add_option("--b", mreq.b, "second fast coordinate (charts)");
  c_maps->add_option("--c", mreq.c, "third fast coordinate (charts)");
  c_maps->add_option("--delta", mreq.delta, "section offset (default 1)");
  c_maps->add_option("--nu", mreq.nu, "weight asymmetry (default 1)");
  c_maps->add_option("--eps", mreq.eps, "entry epsilon coordinate");
  c_maps->add_option("--mu", mreq.mu, "exit epsilon coordinate (pi1)");
  c_maps->add_option("--r", mreq.r, "blow-up radius");
  c_maps->add_option("--y", mreq.y, "chart-2 slow coordinate (k21/k23)");
  c_maps->add_option("--chart", mreq.chart, "k12 | k21 | k32 | k23");

  CLI::App* c_presets =
      app.add_subcommand("presets", "list the preset scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_presets->parsed()) {
      for (const std::string& n : preset_names()) std::cout << n << "\n";
      return 0;
    }
    if (c_maps->parsed()) return cmd_maps(mreq, std::cout, std::cerr);

    // run/compare/analyze need a scenario source
    if (config_path.empty() == preset_name.empty()) {
      std::cerr << "give exactly one of --config or --preset\n";
      return 2;
    }
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else {
      cfg.preset_name = preset_name;
    }
    if (!integrator.empty()) cfg.method = integrator;
    if (!outdir_flag.empty()) cfg.outdir = outdir_flag;
    const RunPlan plan = materialize(cfg);

    if (c_run->parsed()) return cmd_run(plan, std::cout, std::cerr);
    if (c_cmp->parsed()) return cmd_compare(plan, std::cout, std::cerr);
    if (c_ana->parsed()) return cmd_analyze(plan, std::cout, std::cerr);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fsnet
