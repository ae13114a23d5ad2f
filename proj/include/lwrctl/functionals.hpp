#pragma once

#include <algorithm>
#include <limits>

#include "lwrctl/flux_model.hpp"
#include "lwrctl/lwr_solver.hpp"

namespace lwrctl {

/// Target profile, barrier threshold and the saturated-linear class-K gains.
///
/// The budgets are C = min(alpha_gain * V, c_cap) and D = min(beta_gain * B, d_cap)
/// for B >= 0, extended linearly (and therefore negatively) for B < 0.
struct FunctionalParams {
  double u_star = 1.0 / 3.0;
  double u_bar = 0.25;
  double alpha_gain = 0.015;
  double beta_gain = 0.5;
  double c_cap = 1e-3;
  double d_cap = std::numeric_limits<double>::infinity();

  double delta(const FluxModel& m) const { return std::min(u_star, m.critical()); }
  double gamma(const FluxModel& m) const { return std::max(u_star, m.critical()); }

  void validate(const FluxModel& m) const {
    if (!(u_star >= 0.0 && u_star <= m.u_max())) throw DomainError("u_star must lie in [0, u_max]");
    if (!(u_bar >= 0.0 && u_bar <= m.u_max())) throw DomainError("u_bar must lie in [0, u_max]");
    if (!(alpha_gain > 0.0)) throw DomainError("alpha_gain must be positive");
    if (!(beta_gain > 0.0)) throw DomainError("beta_gain must be positive");
    if (!(c_cap > 0.0)) throw DomainError("c_cap must be positive");
    if (!(d_cap > 0.0)) throw DomainError("d_cap must be positive");
  }
};

/// V = 1/2 * integral of (u - u*)^2, by cell-average quadrature.
inline double lyapunov_v(const GridState& state, const FunctionalParams& p) {
  double sum = 0.0;
  for (double u : state.cells) sum += (u - p.u_star) * (u - p.u_star);
  return 0.5 * state.dx() * sum;
}

/// B = u_bar^2 - integral of u^2.
inline double barrier_b(const GridState& state, const FunctionalParams& p) {
  double sum = 0.0;
  for (double u : state.cells) sum += u * u;
  return p.u_bar * p.u_bar - state.dx() * sum;
}

/// Stability potential h(s) = (s - u*) f(s) - F(s); g(s, z) = h(s) - h(z).
inline double stability_potential(double s, const FunctionalParams& p, const FluxModel& m) {
  return (s - p.u_star) * m.flux(s) - m.primitive(s);
}

/// Invariance potential s f(s) - F(s); k(s, z) is its difference.
inline double invariance_potential(double s, const FluxModel& m) { return s * m.flux(s) - m.primitive(s); }

/// Boundary contribution to dV/dt for left trace s and right trace z.
inline double g_eval(double s, double z, const FunctionalParams& p, const FluxModel& m) {
  return (s - p.u_star) * m.flux(s) - (z - p.u_star) * m.flux(z) - m.primitive(s) + m.primitive(z);
}

/// Boundary contribution to -dB/dt (up to a factor 2) for traces s and z.
inline double k_eval(double s, double z, const FluxModel& m) {
  return s * m.flux(s) - z * m.flux(z) - m.primitive(s) + m.primitive(z);
}

inline double budget_c(double v, const FunctionalParams& p) {
  if (v < 0.0) throw DomainError("budget_c: negative Lyapunov value");
  return std::min(p.alpha_gain * v, p.c_cap);
}

inline double budget_d(double b, const FunctionalParams& p) {
  if (b < 0.0) return p.beta_gain * b;
  return std::min(p.beta_gain * b, p.d_cap);
}

}  // namespace lwrctl
