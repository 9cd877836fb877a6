#include "fsnet/specfun.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace fsnet {

namespace {

// Maclaurin series, adequate for |x| <= 1: D(x) = sum_k (-2x^2)^k x / (2k+1)!!
double dawson_series(double ax) {
  double term = ax;
  double sum = ax;
  const double q = -2.0 * ax * ax;
  for (int k = 0; k < 64; ++k) {
    term *= q / (2.0 * k + 3.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Sampled-exponential expansion (Rybicki) on 1 < |x| <= 6. With grid spacing
// h the sampling error is exp(-(pi/(2h))^2) ~ 7e-18, and 16 terms per side
// cover the Gaussian window to below 1e-25.
double dawson_sampled(double ax) {
  constexpr double h = 0.25;
  constexpr int nmax = 16;
  static const std::array<double, nmax + 1> c = [] {
    std::array<double, nmax + 1> tbl{};
    for (int i = 1; i <= nmax; ++i) {
      const double u = (2.0 * i - 1.0) * h;
      tbl[i] = std::exp(-u * u);
    }
    return tbl;
  }();
  static const double inv_sqrt_pi = 1.0 / std::sqrt(std::acos(-1.0));

  const int n0 = 2 * int(0.5 * ax / h + 0.5);  // nearest even multiple of h
  const double xp = ax - n0 * h;
  double e1 = std::exp(2.0 * xp * h);
  const double e2 = e1 * e1;
  double d1 = n0 + 1.0;
  double d2 = d1 - 2.0;
  double sum = 0.0;
  for (int i = 1; i <= nmax; ++i) {
    sum += c[i] * (e1 / d1 + 1.0 / (d2 * e1));
    d1 += 2.0;
    d2 -= 2.0;
    e1 *= e2;
  }
  return inv_sqrt_pi * std::exp(-xp * xp) * sum;
}

// Asymptotic series D(x) ~ 1/(2x) sum_k (2k-1)!!/(2x^2)^k for |x| > 6;
// terms shrink by at least (2k+1)/72, and the optimally truncated error is
// below exp(-x^2), i.e. < 3e-16 relative at the regime boundary.
double dawson_asymptotic(double ax) {
  const double r = 1.0 / (2.0 * ax * ax);
  double term = 1.0 / (2.0 * ax);
  double sum = term;
  for (int k = 0; k < 40; ++k) {
    const double next = term * (2.0 * k + 1.0) * r;
    if (std::abs(next) >= std::abs(term)) break;  // divergence onset
    term = next;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double dawson(double x) {
  if (std::isnan(x)) throw std::domain_error("dawson: NaN argument");
  const double ax = std::abs(x);
  double v;
  if (ax <= 1.0)
    v = dawson_series(ax);
  else if (ax <= 6.0)
    v = dawson_sampled(ax);
  else
    v = dawson_asymptotic(ax);
  return std::signbit(x) ? -v : v;
}

DawsonEval dawson_with_derivative(double x) {
  const double v = dawson(x);
  return {x, v, 1.0 - 2.0 * x * v};
}

double scaled_dawson_inverse(double c) {
  if (!std::isfinite(c))
    throw std::domain_error("scaled_dawson_inverse: non-finite argument");
  if (c == 0.0) return 0.0;
  if (c < 0.0) return -scaled_dawson_inverse(-c);

  // G(x) = exp(x^2) D(x) is odd and strictly increasing. Solve the
  // log-residual equation f(x) = x^2 + log D(x) - log c = 0; its derivative
  // is exactly 1/D(x), so the Newton update is x - f(x) * D(x).
  const double logc = std::log(c);
  double lo, hi;
  if (c <= 1.0) {
    // x <= exp(x^2) D(x) <= 2x on [0,1] brackets the root tightly
    lo = 0.5 * c;
    hi = c;
  } else {
    lo = 0.5;
    hi = 1.0;
    while (hi * hi + std::log(dawson(hi)) < logc) {
      lo = hi;
      hi *= 2.0;
      if (hi > 64.0)
        throw std::runtime_error("scaled_dawson_inverse: bracketing failed");
    }
  }

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 80; ++it) {
    const double d = dawson(x);
    const double f = x * x + std::log(d) - logc;
    if (std::abs(f) < 1e-14) break;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    double xn = x - f * d;  // Newton
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // safeguard
    if (xn == x) break;
    x = xn;
  }
  return x;
}

}  // namespace fsnet
