#pragma once

#include <utility>

namespace fsnet {

// Local coordinates of the blow-up of the non-hyperbolic point. In the entry
// chart K1 the fourth coordinate is the rescaled epsilon; in the rescaling
// chart K2 it is the rescaled slow variable y2; in the exit chart K3 it is
// again a rescaled epsilon. r >= 0 is the blow-down radius.
enum class ChartId { K1, K2, K3 };

struct ChartPoint {
  ChartId chart = ChartId::K2;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double y_or_eps = 0.0;
  double r = 0.0;
};

// Chart transition maps. Domains: k12 and k32 need the source epsilon
// coordinate > 0; k21 needs y2 > 0; k23 needs y2 < 0. Each pair satisfies
// k12 o k21 = id (and likewise for k23/k32); violations throw
// std::domain_error naming the failed condition.
enum class ChartMapKind { k12, k21, k32, k23 };

ChartPoint chart_map(ChartMapKind which, const ChartPoint& p);

enum class TransitionStatus { Crossed, BlownUpAtAsymptote, IllDefined };

struct TransitionResult {
  TransitionStatus status = TransitionStatus::Crossed;
  ChartPoint exit{};     // meaningful when status == Crossed
  double gamma2 = 0.0;   // asymptote location when status == BlownUpAtAsymptote
};

// Entry-chart transition: follows the leading-order K1 flow from the section
// {eps1 = eps1_in} to {eps1 = mu1} and reports the a-coordinate
//   h = -a1 * E / (nu*a1*E - (nu*a1 + 1)),  E = exp(-2*T1),
// with T1 = (1/eps1 - 1/mu1)/2. The exit point sits at r = delta1 *
// sqrt(eps1/mu1). IllDefined iff the denominator vanishes along the way,
// which happens exactly when nu*a1 + 1 < 0 and T1 >= log(nu*a1/(nu*a1+1))/2.
TransitionResult pi1_map(double a1, double delta1, double eps1, double mu1,
                         double nu);

// Solution of the rescaled planar system a' = -2(y + nu a)a, y' = -1 through
// (a_star, y_star), evaluated at y. The closed form
//   a(y) = a_star / ( exp(y_star^2 - y^2)(1 + 2 a_star nu D(y_star))
//                      - 2 a_star nu D(y) )
// has at most one vertical asymptote; blown_up reports whether the requested
// y lies beyond it, and blow_y carries the asymptote location.
struct K2Evaluation {
  bool blown_up = false;
  double a = 0.0;
  double blow_y = 0.0;
};

K2Evaluation k2_explicit_solution(double a_star, double y_star, double nu,
                                  double y);

// Transition through the rescaling chart from the entry section {y2 = delta2}
// to the exit section {y2 = -delta2}. Crossed iff 1 + 4 a nu D(delta2) > 0,
// in which case a_exit = a / (1 + 4 a nu D(delta2)) and r is unchanged;
// otherwise the orbit diverges at the asymptote y2 = Gamma2 in [-delta2, delta2).
TransitionResult pi2_map(double r, double a, double delta2, double nu);

// Vertical-asymptote location of the blown-up K2 orbit entering at
// (a_star, delta2) in the non-crossing regime 1 + 4 a_star nu D(delta2) <= 0
// (requires a_star < 0, nu > 0). Solves exp(G^2) D(G) = exp(delta2^2) *
// (1/(2 a_star nu) + D(delta2)).
double gamma2_asymptote(double a_star, double delta2, double nu);

// The invariant curve a = -1/(2 nu D(y)) of the rescaled planar system; the
// repelling branch lies at y > 0 (a < 0), the attracting one at y < 0
// (a > 0). Pole at y = 0; undefined for nu = 0.
enum class Gamma2Branch { Repelling, Attracting };

double gamma2_curve(double y, double nu, Gamma2Branch branch);

// Slow-manifold graph of the full (unrescaled) planar system,
// H(y, eps) = -sqrt(eps) / (2 nu D(y / sqrt(eps))); requires eps > 0,
// nu > 0, y != 0.
double slow_manifold_H(double y, double eps, double nu);

// Rescaled planar vector field (a', y') with y' = -1 (chart-K2 time).
std::pair<double, double> k2_reduced_field(double a, double y, double nu);

// Rescaled reduced field of the triangle with general fixed weights,
// restricted to the invariant cluster set: (a', b', y') =
// ((y + alpha1 a + alpha2 b)(b - a), -(...), -1). Independent of the fixed
// weights at leading order; restricting to b = -a recovers k2_reduced_field.
struct K2NonsymField {
  double da;
  double db;
  double dy;
};

K2NonsymField k2_nonsym_reduced_field(double a, double b, double y,
                                      double alpha1, double alpha2);

}  // namespace fsnet
