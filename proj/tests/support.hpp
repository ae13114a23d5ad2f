#pragma once

// Reference formulas written out independently of the library, used as test oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include <boost/rational.hpp>

namespace ref {

inline double f(double u, double M = 1.0) { return u * (1.0 - u / M); }
inline double F(double u, double M = 1.0) { return u * u / 2.0 - u * u * u / (3.0 * M); }
inline double h(double s, double u_star, double M = 1.0) { return (s - u_star) * f(s, M) - F(s, M); }
inline double mt(double s, double M = 1.0) { return s * f(s, M) - F(s, M); }

using Q = boost::rational<std::int64_t>;

inline Q fq(Q u) { return u * (Q(1) - u); }
inline Q Fq(Q u) { return u * u / Q(2) - u * u * u / Q(3); }
inline Q hq(Q s, Q u_star) { return (s - u_star) * fq(s) - Fq(s); }
inline Q mtq(Q s) { return s * fq(s) - Fq(s); }

inline double to_double(Q q) { return boost::rational_cast<double>(q); }

/// Entropy solution of the Riemann problem for u_t + (u(1 - u/M))_x = 0 at x/t = xi.
inline double riemann(double uL, double uR, double xi, double M = 1.0) {
  if (uL < uR) {
    const double s = 1.0 - (uL + uR) / M;
    return xi < s ? uL : uR;
  }
  const double left_edge = 1.0 - 2.0 * uL / M;
  const double right_edge = 1.0 - 2.0 * uR / M;
  if (xi <= left_edge) return uL;
  if (xi >= right_edge) return uR;
  return 0.5 * M * (1.0 - xi);
}

/// Exact L1 distance between a piecewise-constant grid function on [a, b] and
/// the Riemann solution centred at x0 at time t, by fine midpoint sampling.
template <class Cells>
double riemann_l1(const Cells& cells, double a, double b, double x0, double t, double uL, double uR,
                  int samples_per_cell = 1000) {
  const double dx = (b - a) / static_cast<double>(cells.size());
  double err = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    double cell = 0.0;
    for (int q = 0; q < samples_per_cell; ++q) {
      const double x = a + (static_cast<double>(i) + (q + 0.5) / samples_per_cell) * dx;
      cell += std::abs(cells[i] - riemann(uL, uR, (x - x0) / t));
    }
    err += cell * dx / samples_per_cell;
  }
  return err;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace ref
