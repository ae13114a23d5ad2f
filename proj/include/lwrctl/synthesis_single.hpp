#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lwrctl/flux_model.hpp"
#include "lwrctl/functionals.hpp"
#include "lwrctl/root_finding.hpp"

namespace lwrctl {

// Admissible intervals on which the boundary rates are convex in the control.

/// Left stability interval [0, (2u* + u_max)/4].
inline Interval stability_left_interval(const FunctionalParams& p, const FluxModel& m) {
  return {0.0, 0.25 * (2.0 * p.u_star + m.u_max())};
}
/// Right stability interval [(2u* + u_max)/4, u_max].
inline Interval stability_right_interval(const FunctionalParams& p, const FluxModel& m) {
  return {0.25 * (2.0 * p.u_star + m.u_max()), m.u_max()};
}
/// Left invariance interval [0, u_max/4].
inline Interval invariance_left_interval(const FluxModel& m) { return {0.0, 0.25 * m.u_max()}; }
/// Right invariance interval [u_max/4, u_max].
inline Interval invariance_right_interval(const FluxModel& m) { return {0.25 * m.u_max(), m.u_max()}; }

enum class SynthesisStatus {
  kInteriorAnchor,      // the unconstrained minimizer already satisfies the constraint
  kConstraintBoundary,  // optimum sits where the constraint is active
  kInfeasible,
};

inline const char* to_string(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::kInteriorAnchor: return "optimal-at-interior-anchor";
    case SynthesisStatus::kConstraintBoundary: return "optimal-at-constraint-boundary";
    case SynthesisStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

/// Result of one boundary-control problem.
///
/// Single-boundary solvers fill only the control they own. `residual` is the
/// constraint value minus its bound at the returned control, so it is <= 0
/// (up to rounding) whenever the outcome is feasible.
struct SynthesisOutcome {
  SynthesisStatus status = SynthesisStatus::kInfeasible;
  std::optional<double> omega_a;
  std::optional<double> omega_b;
  std::string case_label;
  double residual = std::nan("");

  bool feasible() const { return status != SynthesisStatus::kInfeasible; }
  double norm_squared() const {
    double n = 0.0;
    if (omega_a) n += *omega_a * *omega_a;
    if (omega_b) n += *omega_b * *omega_b;
    return n;
  }
};

namespace detail {

inline void require_nonnegative_budget(double c, const char* who) {
  if (!(c >= 0.0)) throw DomainError(std::string(who) + ": stability budget must be nonnegative");
}

inline SynthesisOutcome left_outcome(SynthesisStatus status, double value, std::string label, double residual) {
  SynthesisOutcome out;
  out.status = status;
  out.omega_a = value;
  out.case_label = std::move(label);
  out.residual = residual;
  return out;
}

inline SynthesisOutcome right_outcome(SynthesisStatus status, double value, std::string label, double residual) {
  SynthesisOutcome out;
  out.status = status;
  out.omega_b = value;
  out.case_label = std::move(label);
  out.residual = residual;
  return out;
}

inline SynthesisOutcome infeasible(std::string label) {
  SynthesisOutcome out;
  out.case_label = std::move(label);
  return out;
}

}  // namespace detail

/// Minimal-norm left control with g(omega_a, u_b) <= -C over the left stability interval.
///
/// p(s) = g(s, u_b) decreases on [0, delta] and increases on [delta, gamma]; the
/// interval ends at (u* + u_hat)/2, so the minimal root (if any) is on [0, delta].
/// When u* = u_hat the function is nonincreasing and the knee is the interval end.
inline SynthesisOutcome solve_stab_left(double u_b, double C, const FunctionalParams& p, const FluxModel& m) {
  u_b = m.checked(u_b);
  detail::require_nonnegative_budget(C, "solve_stab_left");
  const Interval ca = stability_left_interval(p, m);
  const double h_b = stability_potential(u_b, p, m);
  auto pfn = [&](double s) { return stability_potential(s, p, m) - h_b; };

  const double knee = p.u_star == m.critical() ? ca.hi : p.delta(m);

  if (pfn(0.0) <= -C) return detail::left_outcome(SynthesisStatus::kInteriorAnchor, 0.0, "a", pfn(0.0) + C);
  if (pfn(knee) <= -C) {
    const double s = root_on_monotone(pfn, Interval(0.0, knee), -C, kRootTol, RootSide::kAtMost);
    return detail::left_outcome(SynthesisStatus::kConstraintBoundary, s, "b", pfn(s) + C);
  }
  return detail::infeasible("c");
}

/// Minimal-norm right control with g(u_a, omega_b) <= -C over the right stability interval.
///
/// q(z) = g(u_a, z) has q'(z) = (z - u*)(z - u_hat)/u_hat, so on the right
/// interval it decreases up to gamma and increases afterwards; for u* = u_hat it
/// is nondecreasing and only the interval start can be optimal.
inline SynthesisOutcome solve_stab_right(double u_a, double C, const FunctionalParams& p, const FluxModel& m) {
  u_a = m.checked(u_a);
  detail::require_nonnegative_budget(C, "solve_stab_right");
  const Interval cb = stability_right_interval(p, m);
  const double h_a = stability_potential(u_a, p, m);
  auto qfn = [&](double z) { return h_a - stability_potential(z, p, m); };

  if (qfn(cb.lo) <= -C) return detail::right_outcome(SynthesisStatus::kInteriorAnchor, cb.lo, "a", qfn(cb.lo) + C);
  if (p.u_star == m.critical()) return detail::infeasible("b");

  const double gamma = p.gamma(m);
  if (qfn(gamma) <= -C) {
    const double z = root_on_monotone(qfn, Interval(cb.lo, gamma), -C, kRootTol, RootSide::kAtMost);
    return detail::right_outcome(SynthesisStatus::kConstraintBoundary, z, "b", qfn(z) + C);
  }
  return detail::infeasible("c");
}

/// Left invariance control: l(s) = k(s, u_b) is increasing on [0, u_max/4].
inline SynthesisOutcome solve_inv_left(double u_b, double D, const FluxModel& m) {
  u_b = m.checked(u_b);
  const double l0 = k_eval(0.0, u_b, m);
  if (l0 <= D) return detail::left_outcome(SynthesisStatus::kInteriorAnchor, 0.0, "a", l0 - D);
  return detail::infeasible("b");
}

/// Right invariance control: rho(z) = k(u_a, z) decreases up to u_hat, then increases.
inline SynthesisOutcome solve_inv_right(double u_a, double D, const FluxModel& m) {
  u_a = m.checked(u_a);
  const Interval ib = invariance_right_interval(m);
  auto rho = [&](double z) { return k_eval(u_a, z, m); };

  if (rho(ib.lo) <= D) return detail::right_outcome(SynthesisStatus::kInteriorAnchor, ib.lo, "a", rho(ib.lo) - D);
  const double u_hat = m.critical();
  if (rho(u_hat) <= D) {
    const double z = root_on_monotone(rho, Interval(ib.lo, u_hat), D, kRootTol, RootSide::kAtMost);
    return detail::right_outcome(SynthesisStatus::kConstraintBoundary, z, "b", rho(z) - D);
  }
  return detail::infeasible("c");
}

inline constexpr std::size_t kBoundaryScanPoints = 512;

namespace detail {

/// Minimizes s^2 + z(s)^2 where z(s) is the minimal feasible right control for
/// left control s, over the set of s that admit any partner.
///
/// `s_range` must be an interval on which `inner` is feasible. The scan is
/// refined by golden-section search around the best sample.
template <class Inner>
SynthesisOutcome scan_boundary_curve(Interval s_range, Inner inner, std::size_t n_scan) {
  struct Sample {
    double s;
    double z;
    double norm;
    bool ok;
  };
  auto evaluate = [&](double s) -> Sample {
    const SynthesisOutcome o = inner(s);
    if (!o.feasible()) return {s, 0.0, INFINITY, false};
    return {s, *o.omega_b, s * s + *o.omega_b * *o.omega_b, true};
  };
  auto better = [](const Sample& x, const Sample& y) {
    if (!x.ok) return false;
    if (!y.ok) return true;
    if (x.norm != y.norm) return x.norm < y.norm;
    return x.s < y.s;
  };

  const std::size_t n = std::max<std::size_t>(n_scan, 2);
  std::vector<Sample> samples(n);
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = s_range.lo + s_range.width() * static_cast<double>(i) / static_cast<double>(n - 1);
    samples[i] = evaluate(i + 1 == n ? s_range.hi : s);
    if (better(samples[i], samples[best])) best = i;
  }
  Sample winner = samples[best];

  if (s_range.width() > 0.0) {
    double lo = samples[best > 0 ? best - 1 : 0].s;
    double hi = samples[best + 1 < n ? best + 1 : n - 1].s;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    Sample f1 = evaluate(x1);
    Sample f2 = evaluate(x2);
    for (int it = 0; it < 80 && hi - lo > kRootTol; ++it) {
      if (better(f1, f2) || (!f2.ok && !f1.ok)) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = evaluate(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = evaluate(x2);
      }
      if (better(f1, winner)) winner = f1;
      if (better(f2, winner)) winner = f2;
    }
  }

  if (!winner.ok) return infeasible("scan");
  SynthesisOutcome out;
  out.status = SynthesisStatus::kConstraintBoundary;
  out.omega_a = winner.s;
  out.omega_b = winner.z;
  out.case_label = "scan";
  return out;
}

}  // namespace detail

/// Two-boundary stability problem: min w_a^2 + w_b^2 with g(w_a, w_b) <= -C
/// over the left and right stability intervals.
inline SynthesisOutcome solve_stab_both(double C, const FunctionalParams& p, const FluxModel& m,
                                        std::size_t n_scan = kBoundaryScanPoints) {
  detail::require_nonnegative_budget(C, "solve_stab_both");
  const Interval ca = stability_left_interval(p, m);
  const Interval cb = stability_right_interval(p, m);
  auto replay = [&](SynthesisOutcome o) {
    if (o.feasible()) o.residual = g_eval(*o.omega_a, *o.omega_b, p, m) + C;
    return o;
  };

  if (g_eval(ca.lo, cb.lo, p, m) <= -C) {
    SynthesisOutcome out;
    out.status = SynthesisStatus::kInteriorAnchor;
    out.omega_a = ca.lo;
    out.omega_b = cb.lo;
    out.case_label = "anchor";
    return replay(out);
  }

  auto h = [&](double x) { return stability_potential(x, p, m); };
  const std::vector<double> critical{p.delta(m), p.gamma(m)};
  const PiecewiseMonotone left(h, ca, critical);
  const PiecewiseMonotone right(h, cb, critical);
  // g(s, z) <= -C for some z  <=>  h(s) <= max_z h(z) - C
  const double level = right.max_value() - C;
  const auto s_lo = left.first_at_most(level);
  const auto s_hi = left.last_at_most(level);
  if (!s_lo || !s_hi) return detail::infeasible("c");

  auto inner = [&](double s) { return solve_stab_right(s, C, p, m); };
  return replay(detail::scan_boundary_curve(Interval(*s_lo, *s_hi), inner, n_scan));
}

/// Two-boundary invariance problem: min w_a^2 + w_b^2 with k(w_a, w_b) <= D
/// over the left and right invariance intervals.
inline SynthesisOutcome solve_inv_both(double D, const FluxModel& m, std::size_t n_scan = kBoundaryScanPoints) {
  const Interval ia = invariance_left_interval(m);
  const Interval ib = invariance_right_interval(m);
  auto replay = [&](SynthesisOutcome o) {
    if (o.feasible()) o.residual = k_eval(*o.omega_a, *o.omega_b, m) - D;
    return o;
  };

  if (k_eval(ia.lo, ib.lo, m) <= D) {
    SynthesisOutcome out;
    out.status = SynthesisStatus::kInteriorAnchor;
    out.omega_a = ia.lo;
    out.omega_b = ib.lo;
    out.case_label = "anchor";
    return replay(out);
  }

  auto mt = [&](double x) { return invariance_potential(x, m); };
  const std::vector<double> critical{m.critical()};
  const PiecewiseMonotone left(mt, ia, critical);
  const PiecewiseMonotone right(mt, ib, critical);
  const double level = right.max_value() + D;
  const auto s_lo = left.first_at_most(level);
  const auto s_hi = left.last_at_most(level);
  if (!s_lo || !s_hi) return detail::infeasible("c");

  auto inner = [&](double s) { return solve_inv_right(s, D, m); };
  return replay(detail::scan_boundary_curve(Interval(*s_lo, *s_hi), inner, n_scan));
}

}  // namespace lwrctl
