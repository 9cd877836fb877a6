#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsnet/scenarios.hpp"

namespace fsnet {

// Parse failure with source position; what() carries "line L, column C: msg".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, int column, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// A run request, either naming a preset or describing the model inline.
// Exactly one of the two forms must be present after parsing.
//
// File grammar (version 1):
//   top level     preset=<name> | outdir=<path> | emit=<list> | version=1
//   [graph]       nodes=<m>, edge=<i> <j> <w> (1-based), dynamic_edge=<i> <j>
//   [weight]      w_star, alpha1, alpha2, alpha3, alpha4, uses_y
//   [drift]       kind=constant|quadratic_a|linear_a, k1=..., beta=...
//   [run]         epsilon, y0, x0=<m values>, dt, t_end, e_A, record_stride,
//                 method=euler|rk4|canard_aware
// '#' starts a comment; blank lines are ignored; later keys override earlier
// ones within the same file.
struct RunConfig {
  std::optional<std::string> preset_name;

  // inline model description (used when preset_name is empty)
  int nodes = 0;
  std::vector<Edge> edges;
  std::optional<std::pair<int, int>> dynamic_edge;
  double w_star = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  std::optional<CubicTerms> cubic;
  bool uses_y = true;
  Drift drift;
  double epsilon = 0.05;

  // run controls (also applied as overrides on top of a preset)
  std::optional<std::vector<double>> x0;
  std::optional<double> y0;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> e_A;
  std::optional<int> record_stride;
  std::optional<std::string> method;  // euler | rk4 | canard_aware

  std::string outdir = ".";
  std::vector<std::string> emit;  // trajectory, report, plotdata, summary
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Resolved execution plan: the scenario to run plus how to run/emit it.
struct RunPlan {
  Scenario scenario;
  bool use_canard_aware = false;
  std::string outdir;
  std::vector<std::string> emit;
};

// Turns a parsed config into a concrete plan. Presets are materialized via
// preset() and then patched with any [run] overrides; inline descriptions
// must provide nodes, the dynamic edge, and x0.
RunPlan materialize(const RunConfig& cfg);

}  // namespace fsnet
