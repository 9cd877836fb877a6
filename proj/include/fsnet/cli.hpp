#pragma once

#include <iosfwd>
#include <string>

#include "fsnet/config.hpp"

namespace fsnet {

// Runs a scenario and writes trajectory.csv, report.txt, plotdata/ panels and
// summary.json under the plan's output directory. Returns 0 when every
// expectation passes, 1 otherwise. The FSNET_OUTDIR environment variable, when
// set, overrides the configured output directory (all commands honor it).
int cmd_run(const RunPlan& plan, std::ostream& out, std::ostream& err);

// Runs the plan's scenario under forward Euler, classical RK4 and the
// canard-aware integrator concurrently and emits a side-by-side table
// (compare.csv + compare.txt): max split of the dynamic-edge pair after the
// slow variable turns negative, handover time, final state. Returns 0 when
// all three runs finish, 1 when any aborts.
int cmd_compare(const RunPlan& plan, std::ostream& out, std::ostream& err);

// No time integration: emits analysis.txt and analysis.json with the critical
// weight, the spectrum at it, and (triangle geometry only) the slow-limit
// manifold report. Returns 0 on success.
int cmd_analyze(const RunPlan& plan, std::ostream& out, std::ostream& err);

// Direct evaluation of the analytic maps for scripting and cross-checks.
struct MapsRequest {
  std::string map;    // pi1 | pi2 | gamma2 | charts
  double a = 0.0;     // fast coordinate (a1 for pi1, a-bar otherwise)
  double b = 0.0;     // charts only
  double c = 0.0;     // charts only
  double delta = 1.0; // section offset (delta1 for pi1, delta2 otherwise)
  double nu = 1.0;    // weight asymmetry alpha1 - alpha2
  double eps = 0.0;   // entry epsilon-coordinate (pi1, charts k12/k32)
  double mu = 0.0;    // exit epsilon-coordinate (pi1)
  double r = 0.0;     // blow-up radius (pi2, charts)
  double y = 0.0;     // chart-2 slow coordinate (charts k21/k23)
  std::string chart;  // k12 | k21 | k32 | k23
};

// Prints the map value; pi2 also prints the cross-check residual against a
// numerically integrated passage, gamma2 the residual of the asymptote
// equation. Domain violations are reported with the violated condition
// spelled out; they return 1.
int cmd_maps(const MapsRequest& req, std::ostream& out, std::ostream& err);

// Full argv entry point (subcommands run/compare/analyze/maps/presets).
// Returns the process exit code: 0 success, 1 failed checks or runtime
// trouble, 2 usage/config errors.
int run_cli(int argc, const char* const* argv);

}  // namespace fsnet
