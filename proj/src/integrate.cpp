#include "fsnet/integrate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fsnet {

namespace {

bool finite_state(const FastSlowState& s) {
  for (int i = 0; i < s.x.size(); ++i)
    if (!std::isfinite(s.x[i])) return false;
  return std::isfinite(s.y);
}

double observable(const FastSlowState& s) {
  return s.x.size() == 3 ? distance_to_A(s) : consensus_distance(s.x);
}

Sample make_sample(const FastSlowState& s, const ModelParams& p, Phase phase) {
  Sample smp;
  smp.state = s;
  smp.w = evaluate_weight(p.weight, s.x[0], s.x[1], s.y);
  smp.dist_A = observable(s);
  smp.phase = phase;
  return smp;
}

double section_value(const Sample& s, SectionVariable v) {
  switch (v) {
    case SectionVariable::Y:
      return s.state.y;
    case SectionVariable::A:
      return s.state.x[0];
    default:
      return s.dist_A;
  }
}

void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(3.0 * cfg.dt < 2.0))
    throw std::invalid_argument(
        "dt too large for the fast contraction rate (need 3*dt < 2)");
  if (!(cfg.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(cfg.e_A > 0.0))
    throw std::invalid_argument("cluster threshold e_A must be positive");
  if (cfg.record_stride < 1)
    throw std::invalid_argument("record_stride must be >= 1");
}

FastSlowState euler_step(const FastSlowState& s, const ModelParams& p,
                         double dt) {
  const int m = p.graph.node_count();
  const Eigen::MatrixXd L = build_laplacian(p.graph, p.weight, s.x, s.y);
  FastSlowState n;
  n.x.resize(m);
  // row-major accumulation in fixed order: the stored row sums of L cancel
  // exactly, which keeps the drift of the invariant 1^T x at rounding level
  // instead of a systematic per-step bias
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += L(i, j) * s.x[j];
    n.x[i] = s.x[i] - dt * acc;
  }
  n.y = s.y + dt * (p.epsilon * p.drift(s.x[0]));
  n.t = s.t + dt;
  return n;
}

FastSlowState rk4_step(const FastSlowState& s, const ModelParams& p,
                       double dt) {
  const int m = p.graph.node_count();
  auto field = [&](const FastSlowState& q) { return full_field(q, p); };
  auto shifted = [&](const Eigen::VectorXd& k, double h) {
    FastSlowState q;
    q.x = s.x + h * k.head(m);
    q.y = s.y + h * k[m];
    q.t = s.t + h;
    return q;
  };
  const Eigen::VectorXd k1 = field(s);
  const Eigen::VectorXd k2 = field(shifted(k1, 0.5 * dt));
  const Eigen::VectorXd k3 = field(shifted(k2, 0.5 * dt));
  const Eigen::VectorXd k4 = field(shifted(k3, dt));
  const Eigen::VectorXd incr =
      (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  FastSlowState n;
  n.x = s.x + incr.head(m);
  n.y = s.y + incr[m];
  n.t = s.t + dt;
  return n;
}

Trajectory simulate(const ModelParams& p, const FastSlowState& ic,
                    const IntegratorConfig& cfg) {
  validate(cfg);
  if (ic.x.size() != p.graph.node_count())
    throw std::invalid_argument("initial state dimension mismatch");
  Trajectory tr;
  FastSlowState s = ic;
  const long long n_steps =
      std::llround((cfg.t_end - ic.t) / cfg.dt);
  if (n_steps < 0) throw std::invalid_argument("t_end precedes initial time");
  tr.samples.push_back(make_sample(s, p, Phase::FullSystem));
  for (long long k = 1; k <= n_steps; ++k) {
    const FastSlowState next = cfg.method == Method::ForwardEuler
                                   ? euler_step(s, p, cfg.dt)
                                   : rk4_step(s, p, cfg.dt);
    if (!finite_state(next)) {
      tr.aborted = true;
      std::ostringstream msg;
      msg << "non-finite state after t = " << s.t;
      tr.error = msg.str();
      break;
    }
    s = next;
    if (k % cfg.record_stride == 0 || k == n_steps)
      tr.samples.push_back(make_sample(s, p, Phase::FullSystem));
  }
  return tr;
}

Trajectory simulate_canard_aware(const ModelParams& p,
                                 const FastSlowState& ic,
                                 const IntegratorConfig& cfg) {
  validate(cfg);
  if (!p.graph.is_unit_triangle())
    throw std::invalid_argument(
        "cluster-set reduction requires the unit triangle");
  if (ic.x.size() != 3)
    throw std::invalid_argument("initial state dimension mismatch");

  Trajectory tr;
  FastSlowState s = ic;
  Phase phase = Phase::FullSystem;
  double a = 0.0;
  const long long n_steps = std::llround((cfg.t_end - ic.t) / cfg.dt);
  if (n_steps < 0) throw std::invalid_argument("t_end precedes initial time");

  auto maybe_switch = [&] {
    if (phase == Phase::FullSystem && distance_to_A(s) <= cfg.e_A) {
      phase = Phase::ReducedOnA;
      tr.switch_time = s.t;
      a = 0.5 * (s.x[0] - s.x[1]);  // projection onto the cluster set
      s.x[0] = a;
      s.x[1] = -a;
      s.x[2] = 0.0;
    }
  };

  maybe_switch();
  tr.samples.push_back(make_sample(s, p, phase));
  for (long long k = 1; k <= n_steps; ++k) {
    if (phase == Phase::FullSystem) {
      const FastSlowState next = euler_step(s, p, cfg.dt);
      if (!finite_state(next)) {
        tr.aborted = true;
        std::ostringstream msg;
        msg << "non-finite state after t = " << s.t;
        tr.error = msg.str();
        break;
      }
      s = next;
      maybe_switch();
    } else {
      const double w = evaluate_weight(p.weight, a, -a, s.y);
      const double a_next = a - cfg.dt * (2.0 * w + 1.0) * a;
      s.y += cfg.dt * (p.epsilon * p.drift(a));
      a = a_next;
      s.t += cfg.dt;
      s.x[0] = a;
      s.x[1] = -a;
      s.x[2] = 0.0;
      if (!finite_state(s)) {
        tr.aborted = true;
        std::ostringstream msg;
        msg << "non-finite state after t = " << s.t - cfg.dt;
        tr.error = msg.str();
        break;
      }
    }
    if (k % cfg.record_stride == 0 || k == n_steps)
      tr.samples.push_back(make_sample(s, p, phase));
  }
  return tr;
}

std::vector<Sample> section_crossings(const Trajectory& tr,
                                      const Section& sec) {
  std::vector<Sample> events;
  for (size_t k = 0; k + 1 < tr.samples.size(); ++k) {
    const Sample& l = tr.samples[k];
    const Sample& r = tr.samples[k + 1];
    const double vl = section_value(l, sec.variable) - sec.value;
    const double vr = section_value(r, sec.variable) - sec.value;
    const bool crosses = (vl > 0.0 && vr <= 0.0) || (vl < 0.0 && vr >= 0.0);
    if (!crosses) continue;
    const bool downward = vl > 0.0;
    if (sec.direction == CrossingDirection::Down && !downward) continue;
    if (sec.direction == CrossingDirection::Up && downward) continue;
    const double theta = vl / (vl - vr);
    Sample ev;
    ev.state.x = l.state.x + theta * (r.state.x - l.state.x);
    ev.state.y = l.state.y + theta * (r.state.y - l.state.y);
    ev.state.t = l.state.t + theta * (r.state.t - l.state.t);
    ev.w = l.w + theta * (r.w - l.w);
    ev.dist_A = observable(ev.state);
    ev.phase = l.phase;
    events.push_back(ev);
  }
  return events;
}

TransitionOutcome transition_map_numeric(const ModelParams& p,
                                         const FastSlowState& entry,
                                         double delta,
                                         const IntegratorConfig& cfg) {
  validate(cfg);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (std::abs(entry.y - delta) > 1e-9 * std::max(1.0, delta))
    throw std::invalid_argument("entry state must lie on the section y = delta");

  constexpr double divergence_threshold = 1e6;
  FastSlowState s = entry;
  const long long n_steps = std::llround(cfg.t_end / cfg.dt);
  for (long long k = 0; k < n_steps; ++k) {
    const FastSlowState next = cfg.method == Method::ForwardEuler
                                   ? euler_step(s, p, cfg.dt)
                                   : rk4_step(s, p, cfg.dt);
    const double mag_prev = s.x.cwiseAbs().maxCoeff();
    const double mag_next = finite_state(next)
                                ? next.x.cwiseAbs().maxCoeff()
                                : std::numeric_limits<double>::infinity();
    if (mag_next > divergence_threshold) {
      TransitionOutcome out;
      out.kind = TransitionOutcome::Kind::Diverged;
      const double theta =
          std::isfinite(mag_next)
              ? (divergence_threshold - mag_prev) / (mag_next - mag_prev)
              : 0.0;
      out.y_at_divergence = s.y + theta * (next.y - s.y);
      return out;
    }
    if (next.y <= -delta) {
      const double theta = (-delta - s.y) / (next.y - s.y);
      TransitionOutcome out;
      out.kind = TransitionOutcome::Kind::Exit;
      out.exit.x = s.x + theta * (next.x - s.x);
      out.exit.y = -delta;
      out.exit.t = s.t + theta * cfg.dt;
      return out;
    }
    s = next;
  }
  throw std::runtime_error(
      "step budget exceeded before reaching the exit section");
}

void write_trajectory_csv(const Trajectory& tr, std::ostream& os) {
  os << trajectory_csv(tr);
}

std::string trajectory_csv(const Trajectory& tr) {
  if (tr.samples.empty())
    throw std::invalid_argument("cannot serialize an empty trajectory");
  const int m = int(tr.samples.front().state.x.size());
  std::string out = "t";
  for (int i = 1; i <= m; ++i) out += ",x" + std::to_string(i);
  out += ",y,w,dist_A,phase\n";
  for (const Sample& s : tr.samples) {
    append_g17(out, s.state.t);
    for (int i = 0; i < m; ++i) {
      out += ',';
      append_g17(out, s.state.x[i]);
    }
    out += ',';
    append_g17(out, s.state.y);
    out += ',';
    append_g17(out, s.w);
    out += ',';
    append_g17(out, s.dist_A);
    out += s.phase == Phase::FullSystem ? ",full\n" : ",reduced\n";
  }
  return out;
}

}  // namespace fsnet
