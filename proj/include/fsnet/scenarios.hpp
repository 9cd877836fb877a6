#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsnet/integrate.hpp"

namespace fsnet {

// Named machine-checkable property evaluated on the finished trajectory.
//   reaches_consensus:          min distance to consensus < threshold
//   reaches_clustering:         some sample with w < gate has |x1-x2| >
//                               threshold (order-free; triangle presets)
//   consensus_then_clustering:  consensus distance dips below threshold
//                               first, then a later sample has consensus
//                               distance > 0.1 while w < gate
//   conserves_sum:              max |1^T x(t) - 1^T x(0)| < threshold
//   returns_to_positive_y:      after y first drops below 0, it recovers
//                               above threshold
//   stays_left_branch:          after the transient (t > gate), x1 stays
//                               below threshold
struct Expectation {
  std::string name;
  double threshold = 0.0;
  double gate = 0.0;
};

struct ReturnMapSpec {
  double y_section = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double leave_band = 0.05;  // must travel this far from the section first
};

struct Scenario {
  std::string name;
  ModelParams model;
  FastSlowState ic;
  IntegratorConfig cfg;
  bool canard_aware_default = false;  // recommended integrator for the preset
  std::optional<ReturnMapSpec> return_spec;
  std::vector<Expectation> expectations;
};

// Catalog of studied setups. Parametrized names: triangle_nonsym(w13,w23),
// ring(n), star(n), complete(n) with n >= 3. Unknown names throw.
Scenario preset(const std::string& name);
std::vector<std::string> preset_names();

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
};

struct ScenarioRun {
  Trajectory trajectory;
  std::vector<CheckResult> checks;
};

ScenarioRun run_scenario(const Scenario& s, bool use_canard_aware);

// Poincare return map of the planar reduced system on the cluster set,
// integrated with the scenario's configured method: from (a0, y_section)
// back to the first crossing of the section in the same direction. nullopt
// when the orbit never returns within the scenario's time budget.
struct ReturnPoint {
  double a1 = 0.0;
  double t_return = 0.0;
};

std::optional<ReturnPoint> return_map_timed(const Scenario& s,
                                            double y_section, double a0);
std::optional<double> return_map(const Scenario& s, double y_section,
                                 double a0);

struct PeriodicOrbit {
  double a_star = 0.0;
  double period = 0.0;
};

// Locates a fixed point of the return map over the scenario's bracket:
// bisection on a sign change of r(a)-a when one exists, otherwise the
// argmin of |r(a)-a| if it is below 1e-7 (conservative systems perturb a
// continuum of periodic orbits, leaving no sign change). Verifies closure
// (|r(a*)-a*| < 1e-4) and 3-period recurrence (|r^3(a*)-a*| < 1e-3).
std::optional<PeriodicOrbit> find_periodic_orbit(const Scenario& s);

// TAP-style textual report of check results.
std::string tap_report(const std::vector<CheckResult>& checks);

// Canonical textual form of a scenario's parameters (golden-file tested).
std::string describe(const Scenario& s);

}  // namespace fsnet
