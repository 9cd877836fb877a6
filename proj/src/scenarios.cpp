#include "fsnet/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace fsnet {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Initial condition for the graph presets: a spread pattern orthogonalized
// against the critical mode, plus a small seed along it. The overall scale s
// keeps the transient from pumping the critical mode above the consensus
// threshold before the graph modes decay; eta sets the seed. The seed sign
// follows 2*v1 + v2 so the departure lands on the side where mode growth
// raises the dynamic weight back towards critical (the attracting clustering
// branch) instead of driving it into finite-time blow-up.
Eigen::VectorXd graph_ic(const Graph& g, double s, double eta) {
  const int m = g.node_count();
  const Eigen::VectorXd v = critical_weight_numeric(g).mode;
  Eigen::VectorXd p(m);
  p[0] = 1.5;
  p[1] = 1.0;
  for (int i = 2; i < m; ++i) p[i] = -2.5 / double(m - 2);
  p -= v.dot(p) * v;
  const double sgn = (2.0 * v[0] + v[1] >= 0.0) ? 1.0 : -1.0;
  Eigen::VectorXd x = s * p + sgn * eta * v;
  x.array() -= x.mean();
  return x;
}

Scenario make_triangle(const std::string& name, double y0, double t_end) {
  Scenario sc{
      name,
      ModelParams(Graph::triangle(),
                  DynamicWeight(-0.5, 2.0, 1.0), 0.05),
      {},
      {},
  };
  sc.ic.x = Eigen::Vector3d(1.5, 1.0, -2.5);
  sc.ic.y = y0;
  sc.cfg.method = Method::ForwardEuler;
  sc.cfg.dt = 1e-3;
  sc.cfg.t_end = t_end;
  sc.cfg.e_A = 1e-9;
  sc.cfg.record_stride = 10;
  sc.expectations = {{"reaches_consensus", 1e-6, 0.0},
                     {"reaches_clustering", 0.1, -1.0},
                     {"conserves_sum", 1e-9, 0.0}};
  return sc;
}

Scenario make_graph_preset(const std::string& name, Graph g, double s,
                           double eta) {
  const double y0 = 0.5;
  const double eps = 0.05;
  const double w_star = critical_weight_numeric(g).w_star;
  Scenario sc{
      name,
      ModelParams(std::move(g), DynamicWeight(0.0, 2.0, 1.0), eps),
      {},
      {},
  };
  sc.ic.x = graph_ic(sc.model.graph, s, eta);
  sc.ic.y = y0;
  sc.cfg.method = Method::ForwardEuler;
  sc.cfg.dt = 1e-3;
  sc.cfg.t_end = std::max(80.0, 2.8 * (y0 - w_star) / eps);
  sc.cfg.e_A = 1e-9;
  sc.cfg.record_stride = 10;
  sc.expectations = {{"consensus_then_clustering", 1e-3, w_star - 0.5},
                     {"conserves_sum", 1e-9, 0.0}};
  return sc;
}

// parses "name(p1,p2,...)"; returns true and fills args on match
bool parse_call(const std::string& text, const std::string& fn,
                std::vector<double>& args) {
  if (text.rfind(fn + "(", 0) != 0 || text.back() != ')') return false;
  std::string inner = text.substr(fn.size() + 1, text.size() - fn.size() - 2);
  args.clear();
  size_t pos = 0;
  while (pos <= inner.size()) {
    size_t comma = inner.find(',', pos);
    const std::string tok =
        inner.substr(pos, comma == std::string::npos ? comma : comma - pos);
    size_t used = 0;
    try {
      args.push_back(std::stod(tok, &used));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad preset argument: " + tok);
    }
    if (used != tok.size())
      throw std::invalid_argument("bad preset argument: " + tok);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return true;
}

}  // namespace

Scenario preset(const std::string& name) {
  if (name == "triangle_y19") return make_triangle(name, 1.9, 100.0);
  if (name == "triangle_y20") return make_triangle(name, 2.0, 110.0);

  std::vector<double> args;
  if (name == "triangle_nonsym" ||
      parse_call(name, "triangle_nonsym", args)) {
    double w13 = 2.0, w23 = 1.0;
    if (!args.empty()) {
      if (args.size() != 2)
        throw std::invalid_argument("triangle_nonsym takes (w13, w23)");
      w13 = args[0];
      w23 = args[1];
    }
    Scenario sc{
        "triangle_nonsym(" + g17(w13) + "," + g17(w23) + ")",
        ModelParams(Graph::triangle(w13, w23), DynamicWeight(0.0, 2.0, 1.0),
                    0.05),
        {},
        {},
    };
    sc.ic.x = Eigen::Vector3d(-1.5, -1.0, 2.5);
    sc.ic.y = 0.5;
    sc.cfg.method = Method::ForwardEuler;
    sc.cfg.dt = 1e-3;
    sc.cfg.t_end = 80.0;
    sc.cfg.e_A = 1e-9;
    sc.cfg.record_stride = 10;
    sc.expectations = {{"consensus_then_clustering", 1e-3, -1.0},
                       {"conserves_sum", 1e-9, 0.0}};
    return sc;
  }
  if (parse_call(name, "ring", args)) {
    if (args.size() != 1 || args[0] != std::floor(args[0]) || args[0] < 3)
      throw std::invalid_argument("ring(n) needs an integer n >= 3");
    const int n = int(args[0]);
    return make_graph_preset("ring(" + std::to_string(n) + ")",
                             Graph::ring(n), 1e-3, 1e-3);
  }
  if (parse_call(name, "star", args)) {
    if (args.size() != 1 || args[0] != std::floor(args[0]) || args[0] < 3)
      throw std::invalid_argument("star(n) needs an integer n >= 3");
    const int n = int(args[0]);
    return make_graph_preset("star(" + std::to_string(n) + ")",
                             Graph::star(n), 1e-2, 1e-3);
  }
  if (parse_call(name, "complete", args)) {
    if (args.size() != 1 || args[0] != std::floor(args[0]) || args[0] < 3)
      throw std::invalid_argument("complete(n) needs an integer n >= 3");
    const int n = int(args[0]);
    return make_graph_preset("complete(" + std::to_string(n) + ")",
                             Graph::complete(n), 1.0, 1e-3);
  }

  if (name == "periodic_drift") {
    Scenario sc{
        name,
        ModelParams(Graph::triangle(), DynamicWeight(-0.5, 1.0, 1.0), 0.05,
                    Drift{DriftKind::QuadraticA, 1.0, 0.0}),
        {},
        {},
    };
    sc.ic.x = Eigen::Vector3d(0.5, -0.5, 0.0);
    sc.ic.y = 0.5;
    sc.cfg.method = Method::RK4;
    sc.cfg.dt = 1e-3;
    sc.cfg.t_end = 100.0;
    sc.cfg.e_A = 1e-9;
    sc.cfg.record_stride = 10;
    sc.return_spec = ReturnMapSpec{0.3, 0.05, 0.95, 0.05};
    sc.expectations = {{"returns_to_positive_y", 0.4, 0.0},
                       {"conserves_sum", 1e-9, 0.0}};
    return sc;
  }
  if (name == "periodic_cubic") {
    Scenario sc{
        name,
        ModelParams(Graph::triangle(),
                    DynamicWeight(-0.5, 2.0, 1.0, CubicTerms{1.0, 1.01}),
                    0.05, Drift{DriftKind::LinearA, 0.0, -0.5}),
        {},
        {},
    };
    sc.ic.x = Eigen::Vector3d(-8.0, 8.0, 0.0);
    sc.ic.y = 0.5;
    sc.cfg.method = Method::ForwardEuler;
    sc.cfg.dt = 1e-3;
    sc.cfg.t_end = 700.0;
    sc.cfg.e_A = 1e-9;
    sc.cfg.record_stride = 20;
    sc.canard_aware_default = true;
    sc.return_spec = ReturnMapSpec{0.0, -11.0, -6.5, 0.2};
    sc.expectations = {{"returns_to_positive_y", 2.0, 0.0},
                       {"stays_left_branch", 0.5, 50.0},
                       {"conserves_sum", 1e-9, 0.0}};
    return sc;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"triangle_y19",  "triangle_y20", "triangle_nonsym(w13,w23)",
          "ring(n)",       "star(n)",      "complete(n)",
          "periodic_drift", "periodic_cubic"};
}

ScenarioRun run_scenario(const Scenario& s, bool use_canard_aware) {
  ScenarioRun run;
  run.trajectory = use_canard_aware
                       ? simulate_canard_aware(s.model, s.ic, s.cfg)
                       : simulate(s.model, s.ic, s.cfg);
  const auto& samples = run.trajectory.samples;

  // index of the consensus minimum (checks that say "then" anchor here)
  size_t kmin = 0;
  double cons_min = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < samples.size(); ++k) {
    const double c = consensus_distance(samples[k].state.x);
    if (c < cons_min) {
      cons_min = c;
      kmin = k;
    }
  }
  const double sum0 = samples.front().state.x.sum();

  for (const Expectation& e : s.expectations) {
    CheckResult res{e.name, false, 0.0};
    if (e.name == "reaches_consensus") {
      res.measured = cons_min;
      res.pass = cons_min < e.threshold;
    } else if (e.name == "reaches_clustering") {
      // cluster split of the dynamic-edge pair under a strongly negative
      // weight, anywhere along the run
      double best = 0.0;
      for (const Sample& smp : samples) {
        const auto& x = smp.state.x;
        if (smp.w < e.gate) best = std::max(best, std::abs(x[0] - x[1]));
      }
      res.measured = best;
      res.pass = best > e.threshold;
    } else if (e.name == "consensus_then_clustering") {
      // near-consensus first, then departure from it after the weight has
      // dropped past the gate; anchored at the consensus minimum so that an
      // initial spread transient cannot trigger the clustering half
      res.measured = cons_min;
      res.pass = false;
      if (cons_min < e.threshold) {
        for (size_t k = kmin; k < samples.size(); ++k) {
          if (consensus_distance(samples[k].state.x) > 0.1 &&
              samples[k].w < e.gate) {
            res.pass = true;
            break;
          }
        }
      }
    } else if (e.name == "conserves_sum") {
      double dev = 0.0;
      for (const Sample& smp : samples)
        dev = std::max(dev, std::abs(smp.state.x.sum() - sum0));
      res.measured = dev;
      res.pass = dev < e.threshold;
    } else if (e.name == "returns_to_positive_y") {
      size_t kneg = samples.size();
      for (size_t k = 0; k < samples.size(); ++k)
        if (samples[k].state.y < 0.0) {
          kneg = k;
          break;
        }
      double ymax = -std::numeric_limits<double>::infinity();
      for (size_t k = kneg; k < samples.size(); ++k)
        ymax = std::max(ymax, samples[k].state.y);
      res.measured = ymax;
      res.pass = kneg < samples.size() && ymax > e.threshold;
    } else if (e.name == "stays_left_branch") {
      double xmax = -std::numeric_limits<double>::infinity();
      for (const Sample& smp : samples)
        if (smp.state.t > e.gate) xmax = std::max(xmax, smp.state.x[0]);
      res.measured = xmax;
      res.pass = xmax < e.threshold;
    } else {
      throw std::logic_error("unknown expectation: " + e.name);
    }
    run.checks.push_back(res);
  }
  if (run.trajectory.aborted)
    run.checks.push_back({"completes_without_divergence", false, 0.0});
  return run;
}

namespace {

// planar reduced integration on the cluster set (state (a, y), b = -a)
struct PlanarState {
  double a;
  double y;
  double t;
};

PlanarState planar_step(const PlanarState& s, const Scenario& sc) {
  const double dt = sc.cfg.dt;
  const double eps = sc.model.epsilon;
  const auto& w = sc.model.weight;
  const auto& drift = sc.model.drift;
  if (sc.cfg.method == Method::ForwardEuler) {
    const double wv = evaluate_weight(w, s.a, -s.a, s.y);
    return {s.a - dt * (2.0 * wv + 1.0) * s.a, s.y + dt * (eps * drift(s.a)),
            s.t + dt};
  }
  auto f = [&](double a, double y) {
    const double wv = evaluate_weight(w, a, -a, y);
    return std::pair<double, double>{-(2.0 * wv + 1.0) * a, eps * drift(a)};
  };
  const auto [k1a, k1y] = f(s.a, s.y);
  const auto [k2a, k2y] = f(s.a + 0.5 * dt * k1a, s.y + 0.5 * dt * k1y);
  const auto [k3a, k3y] = f(s.a + 0.5 * dt * k2a, s.y + 0.5 * dt * k2y);
  const auto [k4a, k4y] = f(s.a + dt * k3a, s.y + dt * k3y);
  return {s.a + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
          s.y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y), s.t + dt};
}

}  // namespace

std::optional<ReturnPoint> return_map_timed(const Scenario& s,
                                            double y_section, double a0) {
  if (!s.return_spec)
    throw std::invalid_argument(
        "return map requires a scenario with a return mechanism");
  const double band = s.return_spec->leave_band;
  PlanarState st{a0, y_section, 0.0};
  const long long n_steps = std::llround(s.cfg.t_end / s.cfg.dt);
  // direction of the initial passage through the section
  const double v0 = s.model.epsilon * s.model.drift(a0);
  if (v0 == 0.0) return std::nullopt;
  const double dir = v0 > 0.0 ? 1.0 : -1.0;
  bool armed = false;
  for (long long k = 0; k < n_steps; ++k) {
    const PlanarState next = planar_step(st, s);
    if (!std::isfinite(next.a) || !std::isfinite(next.y)) return std::nullopt;
    if (!armed && std::abs(next.y - y_section) > band) armed = true;
    if (armed) {
      const double vl = (st.y - y_section) * dir;
      const double vr = (next.y - y_section) * dir;
      if (vl < 0.0 && vr >= 0.0) {  // crossing in the original direction
        const double theta = vl / (vl - vr);
        return ReturnPoint{st.a + theta * (next.a - st.a),
                           st.t + theta * s.cfg.dt};
      }
    }
    st = next;
  }
  return std::nullopt;
}

std::optional<double> return_map(const Scenario& s, double y_section,
                                 double a0) {
  const auto r = return_map_timed(s, y_section, a0);
  if (!r) return std::nullopt;
  return r->a1;
}

std::optional<PeriodicOrbit> find_periodic_orbit(const Scenario& s) {
  if (!s.return_spec) return std::nullopt;
  const double ys = s.return_spec->y_section;
  const double lo = s.return_spec->bracket_lo;
  const double hi = s.return_spec->bracket_hi;
  constexpr int grid_n = 13;

  struct Probe {
    double a;
    double g;
  };
  std::vector<Probe> probes;
  for (int i = 0; i < grid_n; ++i) {
    const double a = lo + (hi - lo) * i / double(grid_n - 1);
    if (a == 0.0) continue;
    const auto r = return_map(s, ys, a);
    if (r) probes.push_back({a, *r - a});
  }
  if (probes.size() < 2) return std::nullopt;

  double a_star = 0.0;
  bool found = false;
  for (size_t i = 0; i + 1 < probes.size(); ++i) {
    if (probes[i].g == 0.0) {
      a_star = probes[i].a;
      found = true;
      break;
    }
    if (probes[i].g * probes[i + 1].g < 0.0) {
      double la = probes[i].a, ra = probes[i + 1].a;
      double lg = probes[i].g;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (la + ra);
        const auto r = return_map(s, ys, mid);
        if (!r) return std::nullopt;
        const double mg = *r - mid;
        if (std::abs(mg) < 1e-12) {
          la = ra = mid;
          break;
        }
        if ((mg < 0.0) == (lg < 0.0)) {
          la = mid;
          lg = mg;
        } else {
          ra = mid;
        }
      }
      a_star = 0.5 * (la + ra);
      found = true;
      break;
    }
  }
  if (!found) {
    // no sign change: accept the best probe only if the displacement is at
    // numerical-noise level (perturbed continuum of periodic orbits)
    const auto best = std::min_element(
        probes.begin(), probes.end(),
        [](const Probe& l, const Probe& r) {
          return std::abs(l.g) < std::abs(r.g);
        });
    if (std::abs(best->g) >= 1e-7) return std::nullopt;
    a_star = best->a;
  }

  const auto r1 = return_map_timed(s, ys, a_star);
  if (!r1 || std::abs(r1->a1 - a_star) >= 1e-4) return std::nullopt;
  const auto r2 = return_map_timed(s, ys, r1->a1);
  if (!r2) return std::nullopt;
  const auto r3 = return_map_timed(s, ys, r2->a1);
  if (!r3 || std::abs(r3->a1 - a_star) >= 1e-3) return std::nullopt;
  return PeriodicOrbit{a_star, r1->t_return};
}

std::string tap_report(const std::vector<CheckResult>& checks) {
  std::string out = "1.." + std::to_string(checks.size()) + "\n";
  for (size_t i = 0; i < checks.size(); ++i) {
    out += checks[i].pass ? "ok " : "not ok ";
    out += std::to_string(i + 1) + " - " + checks[i].name + " (measured " +
           g17(checks[i].measured) + ")\n";
  }
  return out;
}

std::string describe(const Scenario& s) {
  std::string out;
  out += "name: " + s.name + "\n";
  out += "nodes: " + std::to_string(s.model.graph.node_count()) + "\n";
  out += "fixed_edges:";
  for (const Edge& e : s.model.graph.fixed_edges())
    out += " (" + std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) +
           ")=" + g17(e.w);
  out += "\n";
  const auto& w = s.model.weight;
  out += "weight: w_star=" + g17(w.w_star) + " alpha1=" + g17(w.alpha1) +
         " alpha2=" + g17(w.alpha2);
  if (w.cubic)
    out += " alpha3=" + g17(w.cubic->alpha3) + " alpha4=" + g17(w.cubic->alpha4);
  out += std::string(" uses_y=") + (w.uses_y ? "1" : "0") + "\n";
  out += "epsilon: " + g17(s.model.epsilon) + "\n";
  switch (s.model.drift.kind) {
    case DriftKind::Constant:
      out += "drift: constant\n";
      break;
    case DriftKind::QuadraticA:
      out += "drift: quadratic_a k1=" + g17(s.model.drift.k1) + "\n";
      break;
    case DriftKind::LinearA:
      out += "drift: linear_a beta=" + g17(s.model.drift.beta) + "\n";
      break;
  }
  out += "x0:";
  for (int i = 0; i < s.ic.x.size(); ++i) out += " " + g17(s.ic.x[i]);
  out += "\n";
  out += "y0: " + g17(s.ic.y) + "\n";
  out += std::string("method: ") +
         (s.cfg.method == Method::ForwardEuler ? "euler" : "rk4") +
         (s.canard_aware_default ? " (canard-aware preferred)" : "") + "\n";
  out += "dt: " + g17(s.cfg.dt) + "\n";
  out += "t_end: " + g17(s.cfg.t_end) + "\n";
  out += "e_A: " + g17(s.cfg.e_A) + "\n";
  out += "record_stride: " + std::to_string(s.cfg.record_stride) + "\n";
  if (s.return_spec) {
    out += "return_section: y=" + g17(s.return_spec->y_section) +
           " bracket=[" + g17(s.return_spec->bracket_lo) + "," +
           g17(s.return_spec->bracket_hi) + "]\n";
  }
  out += "expectations:";
  for (const Expectation& e : s.expectations) out += " " + e.name;
  out += "\n";
  return out;
}

}  // namespace fsnet
