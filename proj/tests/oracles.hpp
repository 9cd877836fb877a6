#pragma once

// Independent reference implementations used only by tests. Everything here
// is deliberately slow and simple so that agreement with the library is
// evidence, not tautology.

#include <cstdint>
#include <utility>

namespace oracles {

// Dawson integral F(x) = exp(-x^2) * int_0^x exp(u^2) du evaluated in 80-bit
// arithmetic as int_0^x exp(u(u-2x)) du (integrand in (0,1], no overflow)
// with adaptive Simpson refinement. Accurate to ~1e-15 relative for
// 0 <= x <= 60, far beyond what the tests demand of the library (1e-12).
long double dawson_reference(long double x);

// Classical RK4 on the planar rescaled system da/dy = 2(y + nu a)a, marched
// in the slow coordinate from (a0, y0) to y1 with n uniform steps.
double planar_rk4(double a0, double y0, double y1, double nu, long long n);

// xorshift64* generator for reproducible pseudo-random test points; returns
// doubles uniform in [lo, hi).
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  double uniform(double lo, double hi);
};

}  // namespace oracles
