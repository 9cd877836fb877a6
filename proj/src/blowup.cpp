#include "fsnet/blowup.hpp"

#include <cmath>
#include <stdexcept>

#include "fsnet/specfun.hpp"

namespace fsnet {

namespace {

void require(bool ok, const char* condition) {
  if (!ok) throw std::domain_error(condition);
}

}  // namespace

ChartPoint chart_map(ChartMapKind which, const ChartPoint& p) {
  ChartPoint q;
  switch (which) {
    case ChartMapKind::k12: {
      require(p.chart == ChartId::K1, "chart transition k12 requires a K1 point");
      require(p.y_or_eps > 0.0, "chart transition k12 requires eps1 > 0");
      const double s = std::sqrt(p.y_or_eps);
      q.chart = ChartId::K2;
      q.r = p.r * s;
      q.a = p.a / s;
      q.b = p.b / s;
      q.c = p.c / s;
      q.y_or_eps = 1.0 / s;
      return q;
    }
    case ChartMapKind::k21: {
      require(p.chart == ChartId::K2, "chart transition k21 requires a K2 point");
      require(p.y_or_eps > 0.0, "chart transition k21 requires y2 > 0");
      const double y2 = p.y_or_eps;
      q.chart = ChartId::K1;
      q.r = p.r * y2;
      q.a = p.a / y2;
      q.b = p.b / y2;
      q.c = p.c / y2;
      q.y_or_eps = 1.0 / (y2 * y2);
      return q;
    }
    case ChartMapKind::k32: {
      require(p.chart == ChartId::K3, "chart transition k32 requires a K3 point");
      require(p.y_or_eps > 0.0, "chart transition k32 requires eps3 > 0");
      const double s = std::sqrt(p.y_or_eps);
      q.chart = ChartId::K2;
      q.r = p.r * s;
      q.a = p.a / s;
      q.b = p.b / s;
      q.c = p.c / s;
      q.y_or_eps = -1.0 / s;
      return q;
    }
    case ChartMapKind::k23: {
      require(p.chart == ChartId::K2, "chart transition k23 requires a K2 point");
      require(p.y_or_eps < 0.0, "chart transition k23 requires y2 < 0");
      const double y2 = p.y_or_eps;
      q.chart = ChartId::K3;
      q.r = -p.r * y2;
      q.a = -p.a / y2;
      q.b = -p.b / y2;
      q.c = -p.c / y2;
      q.y_or_eps = 1.0 / (y2 * y2);
      return q;
    }
  }
  throw std::logic_error("unknown chart map");
}

TransitionResult pi1_map(double a1, double delta1, double eps1, double mu1,
                         double nu) {
  require(delta1 > 0.0, "pi1 requires delta1 > 0");
  require(eps1 > 0.0 && eps1 <= mu1, "pi1 requires 0 < eps1 <= mu1");
  const double t1 = 0.5 * (1.0 / eps1 - 1.0 / mu1);
  const double q = nu * a1;
  if (q + 1.0 < 0.0) {
    // the denominator nu*a1 - (nu*a1+1)exp(2T) crosses zero at
    // T = log(q/(q+1))/2; beyond it the transition is not defined
    const double t_blow = 0.5 * std::log(q / (q + 1.0));
    if (t1 >= t_blow) return {TransitionStatus::IllDefined, {}, 0.0};
  }
  const double e = std::exp(-2.0 * t1);  // underflows harmlessly for huge T1
  const double h = -a1 * e / (q * e - (q + 1.0));
  TransitionResult res;
  res.status = TransitionStatus::Crossed;
  res.exit.chart = ChartId::K1;
  res.exit.a = h;
  res.exit.b = 0.0;
  res.exit.c = 0.0;
  res.exit.y_or_eps = mu1;
  res.exit.r = delta1 * std::sqrt(eps1 / mu1);
  return res;
}

K2Evaluation k2_explicit_solution(double a_star, double y_star, double nu,
                                  double y) {
  const double s = 2.0 * a_star * nu;
  const double d_star = dawson(y_star);
  if (s != 0.0) {
    // the denominator is proportional to K - s * exp(y^2) D(y) with
    // K = exp(y_star^2)(1 + s D(y_star)); the scaled Dawson transform is a
    // strictly increasing bijection, so there is at most one asymptote
    const double c0 = std::exp(y_star * y_star) * (1.0 / s + d_star);
    if (std::isfinite(c0)) {
      const double y_blow = scaled_dawson_inverse(c0);
      const bool beyond = (s > 0.0) ? (y >= y_blow) : (y <= y_blow);
      if (beyond) return {true, 0.0, y_blow};
    }
  }
  const double den = std::exp(y_star * y_star - y * y) * (1.0 + s * d_star) -
                     s * dawson(y);
  return {false, a_star / den, 0.0};
}

TransitionResult pi2_map(double r, double a, double delta2, double nu) {
  require(delta2 > 0.0, "pi2 requires delta2 > 0");
  require(r >= 0.0, "pi2 requires r >= 0");
  const double den = 1.0 + 4.0 * a * nu * dawson(delta2);
  if (den > 0.0) {
    TransitionResult res;
    res.status = TransitionStatus::Crossed;
    res.exit.chart = ChartId::K2;
    res.exit.a = a / den;
    res.exit.b = 0.0;
    res.exit.c = 0.0;
    res.exit.y_or_eps = -delta2;
    res.exit.r = r;
    return res;
  }
  return {TransitionStatus::BlownUpAtAsymptote, {},
          gamma2_asymptote(a, delta2, nu)};
}

double gamma2_asymptote(double a_star, double delta2, double nu) {
  if (!(a_star < 0.0))
    throw std::domain_error("gamma2 asymptote requires a_star < 0");
  if (!(nu > 0.0)) throw std::domain_error("gamma2 asymptote requires nu > 0");
  if (!(delta2 > 0.0))
    throw std::domain_error("gamma2 asymptote requires delta2 > 0");
  const double d = dawson(delta2);
  if (1.0 + 4.0 * a_star * nu * d > 0.0)
    throw std::domain_error(
        "denominator condition 1 + 4*a*nu*D(delta2) <= 0 violated: the orbit "
        "crosses the exit section instead of blowing up");
  const double c0 =
      std::exp(delta2 * delta2) * (1.0 / (2.0 * a_star * nu) + d);
  return scaled_dawson_inverse(c0);
}

double gamma2_curve(double y, double nu, Gamma2Branch branch) {
  if (!(nu > 0.0))
    throw std::domain_error("invariant curve undefined for nu = 0");
  if (y == 0.0) throw std::domain_error("invariant curve has a pole at y = 0");
  if (branch == Gamma2Branch::Repelling && y < 0.0)
    throw std::domain_error("repelling branch lies at y > 0");
  if (branch == Gamma2Branch::Attracting && y > 0.0)
    throw std::domain_error("attracting branch lies at y < 0");
  return -1.0 / (2.0 * nu * dawson(y));
}

double slow_manifold_H(double y, double eps, double nu) {
  if (!(eps > 0.0)) throw std::domain_error("slow manifold requires eps > 0");
  if (!(nu > 0.0)) throw std::domain_error("slow manifold requires nu > 0");
  if (y == 0.0) throw std::domain_error("slow manifold has a pole at y = 0");
  const double s = std::sqrt(eps);
  return -s / (2.0 * nu * dawson(y / s));
}

std::pair<double, double> k2_reduced_field(double a, double y, double nu) {
  return {-2.0 * (y + nu * a) * a, -1.0};
}

K2NonsymField k2_nonsym_reduced_field(double a, double b, double y,
                                      double alpha1, double alpha2) {
  const double da = (y + alpha1 * a + alpha2 * b) * (b - a);
  return {da, -da, -1.0};
}

}  // namespace fsnet
