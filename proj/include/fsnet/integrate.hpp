#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fsnet/dynamics.hpp"

namespace fsnet {

enum class Method { ForwardEuler, RK4 };

struct IntegratorConfig {
  Method method = Method::ForwardEuler;
  double dt = 1e-3;
  double t_end = 100.0;
  double e_A = 1e-9;      // cluster-set switching threshold
  int record_stride = 1;  // keep every k-th sample (first and last always)
};

// Throws std::invalid_argument on dt <= 0, the fast-contraction stability
// bound 3*dt >= 2, e_A <= 0, or record_stride < 1.
void validate(const IntegratorConfig& cfg);

enum class Phase { FullSystem, ReducedOnA };

struct Sample {
  FastSlowState state;
  double w = 0.0;       // dynamic edge weight at the sample
  double dist_A = 0.0;  // |x3-(x1+x2)/2| for m=3, consensus distance otherwise
  Phase phase = Phase::FullSystem;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::optional<double> switch_time;  // time of the full -> reduced handover
  bool aborted = false;               // a step produced a non-finite state
  std::string error;
};

FastSlowState euler_step(const FastSlowState& s, const ModelParams& p,
                         double dt);
FastSlowState rk4_step(const FastSlowState& s, const ModelParams& p,
                       double dt);

// Fixed-step integration from ic.t to cfg.t_end. On a non-finite state the
// run aborts, keeping the last valid sample and setting aborted/error.
Trajectory simulate(const ModelParams& p, const FastSlowState& ic,
                    const IntegratorConfig& cfg);

// Euler-based scheme that hands over to the scalar recursion on the cluster
// set: full forward-Euler steps until |x3 - (x1+x2)/2| <= e_A, then
// a_{j+1} = a_j - dt*(2 w_j + 1)*a_j with w_j = w(a_j, -a_j, y_j) and the
// state pinned to (a, -a, 0). The multiplicative recursion preserves the
// sign and magnitude of a through the exponentially contracted passage,
// which additive full-system arithmetic cannot do. Unit triangle only;
// cfg.method is ignored (the scheme is Euler-based by construction).
Trajectory simulate_canard_aware(const ModelParams& p, const FastSlowState& ic,
                                 const IntegratorConfig& cfg);

enum class SectionVariable { Y, A, DistA };
enum class CrossingDirection { Down, Up, Both };

struct Section {
  SectionVariable variable = SectionVariable::Y;
  double value = 0.0;
  CrossingDirection direction = CrossingDirection::Both;
};

// Linear-interpolation crossing events of a recorded trajectory.
std::vector<Sample> section_crossings(const Trajectory& tr, const Section& sec);

struct TransitionOutcome {
  enum class Kind { Exit, Diverged } kind = Kind::Exit;
  FastSlowState exit;              // state interpolated onto {y = -delta}
  double y_at_divergence = 0.0;    // y where max|x_i| crossed 1e6
};

// Numerical realization of the transition past the non-hyperbolic point:
// integrates the full system from the entry section {y = +delta} until
// either y reaches -delta (Exit, state interpolated onto the section) or
// max|x_i| exceeds 1e6 (Diverged, with the interpolated y). Throws if the
// entry is not on the section or the step budget (t_end) runs out first.
TransitionOutcome transition_map_numeric(const ModelParams& p,
                                         const FastSlowState& entry,
                                         double delta,
                                         const IntegratorConfig& cfg);

// CSV with header t,x1,...,xm,y,w,dist_A,phase at 17 significant digits;
// re-reading reproduces every float bit-exactly.
void write_trajectory_csv(const Trajectory& tr, std::ostream& os);
std::string trajectory_csv(const Trajectory& tr);

}  // namespace fsnet
