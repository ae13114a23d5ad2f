#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "lwrctl/functionals.hpp"
#include "lwrctl/root_finding.hpp"
#include "lwrctl/synthesis_single.hpp"

namespace lwrctl {

/// Minimum of a partner constraint over the opposite interval, with the partner attaining it.
struct PartnerMin {
  double value = 0.0;
  double partner = 0.0;
};

namespace detail {

/// Exact extremum of fn over candidate points (interval ends plus interior critical points).
template <class Fn>
PartnerMin extremum_over(Fn fn, Interval range, std::initializer_list<double> critical, bool maximize) {
  PartnerMin best{fn(range.lo), range.lo};
  auto consider = [&](double x) {
    const double v = fn(x);
    if (maximize ? v > best.value : v < best.value) best = {v, x};
  };
  for (double x : critical) consider(range.clip(x));
  consider(range.hi);
  return best;
}

}  // namespace detail

/// min over z in I_b of g(s, z) = h(s) - max_{I_b} h.
inline PartnerMin partner_min_g_over_Ib(double s, const FunctionalParams& p, const FluxModel& m) {
  auto h = [&](double x) { return stability_potential(x, p, m); };
  const PartnerMin top = detail::extremum_over(h, invariance_right_interval(m), {p.delta(m), p.gamma(m)}, true);
  return {h(m.checked(s)) - top.value, top.partner};
}

/// min over z in I_b of k(s, z).
inline PartnerMin partner_min_k_over_Ib(double s, const FluxModel& m) {
  auto mt = [&](double x) { return invariance_potential(x, m); };
  const PartnerMin top = detail::extremum_over(mt, invariance_right_interval(m), {m.critical()}, true);
  return {mt(m.checked(s)) - top.value, top.partner};
}

/// min over s in C_a of g(s, z) = min_{C_a} h - h(z).
inline PartnerMin partner_min_g_over_Ca(double z, const FunctionalParams& p, const FluxModel& m) {
  auto h = [&](double x) { return stability_potential(x, p, m); };
  const PartnerMin low = detail::extremum_over(h, stability_left_interval(p, m), {p.delta(m), p.gamma(m)}, false);
  return {low.value - h(m.checked(z)), low.partner};
}

/// min over s in C_a of k(s, z).
inline PartnerMin partner_min_k_over_Ca(double z, const FunctionalParams& p, const FluxModel& m) {
  auto mt = [&](double x) { return invariance_potential(x, m); };
  const PartnerMin low = detail::extremum_over(mt, stability_left_interval(p, m), {m.critical()}, false);
  return {low.value - mt(m.checked(z)), low.partner};
}

/// Largest C for which g(s, z) <= -C is satisfiable with s in C_a and z in I_b.
inline double feasibility_margin(const FunctionalParams& p, const FluxModel& m) {
  auto h = [&](double x) { return stability_potential(x, p, m); };
  const double low = detail::extremum_over(h, stability_left_interval(p, m), {p.delta(m), p.gamma(m)}, false).value;
  const double top = detail::extremum_over(h, invariance_right_interval(m), {p.delta(m), p.gamma(m)}, true).value;
  return -(low - top);
}

/// One admissible control stored while building the candidate sets.
struct CompoundCandidate {
  double value = 0.0;
  std::string source;             // V1a, V1b, V2a, V2-root, V3a, V3b, V4a, V4b
  double stability_residual = 0;  // partner-min g + C, <= 0 when admissible
  double invariance_residual = 0; // partner-min k - D, <= 0 when admissible
  double g_partner = 0.0;         // partner attaining the g minimum
  double k_partner = 0.0;         // partner attaining the k minimum
};

/// One side of the relaxed compound problem: its outcome plus the candidate set it was picked from.
struct CompoundSide {
  SynthesisOutcome outcome;
  std::vector<CompoundCandidate> candidates;
};

namespace detail {

inline bool admissible(const CompoundCandidate& c) {
  return c.stability_residual <= 0.0 && c.invariance_residual <= 0.0;
}

inline CompoundSide finish_side(std::vector<CompoundCandidate> set, bool left) {
  CompoundSide side;
  side.candidates = std::move(set);
  const CompoundCandidate* best = nullptr;
  for (const auto& c : side.candidates) {
    if (!best || c.value * c.value < best->value * best->value ||
        (c.value * c.value == best->value * best->value && c.value < best->value)) {
      best = &c;
    }
  }
  if (!best) {
    side.outcome = infeasible("empty");
    return side;
  }
  const bool anchor = best->source.back() == 'a';
  const SynthesisStatus status = anchor ? SynthesisStatus::kInteriorAnchor : SynthesisStatus::kConstraintBoundary;
  const double residual = std::max(best->stability_residual, best->invariance_residual);
  side.outcome = left ? left_outcome(status, best->value, best->source, residual)
                      : right_outcome(status, best->value, best->source, residual);
  return side;
}

/// Keeps the minimal-norm admissible point among `roots` (all nonnegative densities).
template <class Make>
void store_min_root(std::vector<CompoundCandidate>& set, const std::vector<double>& roots, Make make) {
  for (double r : roots) {
    CompoundCandidate c = make(r);
    if (admissible(c)) {
      set.push_back(std::move(c));
      return;
    }
  }
}

}  // namespace detail

/// Left side: min w_a^2 over C_a subject to g(w_a, z1) <= -C and k(w_a, z2) <= D
/// for some z1, z2 in I_b. Builds the candidate set U following the cases
/// (V1) stability-active then (V2) invariance-active.
inline CompoundSide solve_compound_left(double C, double D, const FunctionalParams& p, const FluxModel& m) {
  detail::require_nonnegative_budget(C, "solve_compound_left");
  const Interval ca = stability_left_interval(p, m);
  auto make = [&](double s, std::string source) {
    const PartnerMin g = partner_min_g_over_Ib(s, p, m);
    const PartnerMin k = partner_min_k_over_Ib(s, m);
    return CompoundCandidate{s, std::move(source), g.value + C, k.value - D, g.partner, k.partner};
  };
  auto g_min = [&](double s) { return partner_min_g_over_Ib(s, p, m).value; };
  auto k_min = [&](double s) { return partner_min_k_over_Ib(s, m).value; };

  std::vector<CompoundCandidate> set;

  // (V1): the stability constraint is active.
  const bool equal_target = p.u_star == m.critical();
  const double knee = equal_target ? ca.hi : p.delta(m);
  if (g_min(0.0) <= -C && k_min(0.0) <= D) set.push_back(make(0.0, "V1a"));
  if (g_min(knee) <= -C) {
    const PiecewiseMonotone pieces(g_min, ca, {p.delta(m), p.gamma(m)});
    std::vector<double> roots = pieces.roots_at_most(-C);
    if (equal_target && roots.size() > 1) roots.resize(1);
    detail::store_min_root(set, roots, [&](double s) { return make(s, "V1b"); });
  }

  // (V2): the invariance constraint is active.
  if (k_min(0.0) <= D && g_min(0.0) <= -C) set.push_back(make(0.0, "V2a"));
  const PiecewiseMonotone k_pieces(k_min, ca, {m.critical()});
  detail::store_min_root(set, k_pieces.roots_at_most(D), [&](double s) { return make(s, "V2-root"); });

  return detail::finish_side(std::move(set), true);
}

/// Right side: min w_b^2 over I_b subject to g(s1, w_b) <= -C and k(s2, w_b) <= D
/// for some s1, s2 in C_a. Builds W from (V3) then (V4).
inline CompoundSide solve_compound_right(double C, double D, const FunctionalParams& p, const FluxModel& m) {
  detail::require_nonnegative_budget(C, "solve_compound_right");
  const Interval ib = invariance_right_interval(m);
  auto make = [&](double z, std::string source) {
    const PartnerMin g = partner_min_g_over_Ca(z, p, m);
    const PartnerMin k = partner_min_k_over_Ca(z, p, m);
    return CompoundCandidate{z, std::move(source), g.value + C, k.value - D, g.partner, k.partner};
  };
  auto g_min = [&](double z) { return partner_min_g_over_Ca(z, p, m).value; };
  auto k_min = [&](double z) { return partner_min_k_over_Ca(z, p, m).value; };

  std::vector<CompoundCandidate> set;
  const double quarter = ib.lo;
  const double u_hat = m.critical();

  // (V3): the stability constraint is active. Roots are taken even when the
  // anchor passes the g test, since the anchor may still fail the k test and
  // leave the optimum at a later edge of the g-feasible set.
  const PiecewiseMonotone g_pieces(g_min, ib, {p.delta(m), p.gamma(m)});
  if (g_min(quarter) <= -C && k_min(quarter) <= D) set.push_back(make(quarter, "V3a"));
  const double valley = p.u_star <= quarter ? u_hat : p.gamma(m);
  if (g_min(valley) <= -C || g_min(quarter) <= -C) {
    detail::store_min_root(set, g_pieces.roots_at_most(-C), [&](double z) { return make(z, "V3b"); });
  }

  // (V4): the invariance constraint is active.
  if (k_min(quarter) <= D && g_min(quarter) <= -C) set.push_back(make(quarter, "V4a"));
  if (k_min(u_hat) <= D) {
    const PiecewiseMonotone k_pieces(k_min, ib, {u_hat});
    detail::store_min_root(set, k_pieces.roots_at_most(D), [&](double z) { return make(z, "V4b"); });
  }

  return detail::finish_side(std::move(set), false);
}

/// Both sides of the compound problem, solved independently.
struct CompoundOutcome {
  std::optional<double> omega_a;
  std::optional<double> omega_b;
  std::vector<CompoundCandidate> u_set;
  std::vector<CompoundCandidate> w_set;
  double stability_margin = std::nan("");   // worst residual of the left pick
  double invariance_margin = std::nan("");  // worst residual of the right pick
};

inline CompoundOutcome solve_compound(double C, double D, const FunctionalParams& p, const FluxModel& m) {
  CompoundSide left = solve_compound_left(C, D, p, m);
  CompoundSide right = solve_compound_right(C, D, p, m);
  CompoundOutcome out;
  out.omega_a = left.outcome.omega_a;
  out.omega_b = right.outcome.omega_b;
  out.u_set = std::move(left.candidates);
  out.w_set = std::move(right.candidates);
  out.stability_margin = left.outcome.residual;
  out.invariance_margin = right.outcome.residual;
  return out;
}

}  // namespace lwrctl
