#pragma once

namespace fsnet {

// Dawson integral D(x) = exp(-x^2) * integral_0^x exp(t^2) dt.
//
// Three-regime evaluation: Maclaurin series for |x| <= 1, a sampled
// trapezoid/Hilbert expansion for 1 < |x| <= 6, and the asymptotic series
// 1/(2x) * sum (2k-1)!!/(2x^2)^k beyond. Relative error below 1e-12 across
// [1e-6, 50]; odd symmetry holds exactly (evaluation uses |x| and the sign).
double dawson(double x);

struct DawsonEval {
  double x;
  double value;
  double derivative;  // 1 - 2 x D(x), evaluated from the identity
};

DawsonEval dawson_with_derivative(double x);

// Solves exp(G^2) * D(G) = c for G. The left side is an odd, strictly
// increasing bijection of the real line, so the solution exists and is
// unique for every finite c; c = 0 returns exactly 0. Safeguarded Newton on
// the log-residual; forward relative residual below 1e-10 * max(1, |c|).
double scaled_dawson_inverse(double c);

}  // namespace fsnet
