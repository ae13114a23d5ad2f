#pragma once

// Brute-force grid oracles for the boundary-control problems. They share no
// code path with the synthesis modules: potentials are re-derived from the
// flux in closed form and admissible points are found by exhaustive scans,
// refined by bisection on the raw feasibility predicate.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace lwrctl::oracle {

inline constexpr std::size_t kGridPoints = 2000;

/// Problem data in plain numbers so the oracle does not depend on the library types.
struct Instance {
  double u_max = 1.0;
  double u_star = 1.0 / 3.0;
  double u_a = 0.0;  // measured left trace
  double u_b = 0.0;  // measured right trace
  double C = 0.0;
  double D = 0.0;
};

struct Answer {
  bool feasible = false;
  double omega_a = std::numeric_limits<double>::quiet_NaN();
  double omega_b = std::numeric_limits<double>::quiet_NaN();
  double objective = std::numeric_limits<double>::infinity();
};

struct Potentials {
  double u_max;
  double u_star;

  double f(double u) const { return u - u * u / u_max; }
  double F(double u) const { return u * u / 2.0 - u * u * u / (3.0 * u_max); }
  double g(double s, double z) const { return (s - u_star) * f(s) - (z - u_star) * f(z) - F(s) + F(z); }
  double k(double s, double z) const { return s * f(s) - z * f(z) - F(s) + F(z); }
};

struct Range {
  double lo;
  double hi;
  double at(std::size_t i, std::size_t n) const {
    return i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
};

/// Smallest point of `range` satisfying `ok`: first feasible grid point, then
/// bisection against the preceding infeasible grid point.
template <class Ok>
std::optional<double> first_feasible(const Ok& ok, Range range, std::size_t n = kGridPoints) {
  double prev = range.lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = range.at(i, n);
    if (ok(x)) {
      if (i == 0) return x;
      double lo = prev;
      double hi = x;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
      }
      return hi;
    }
    prev = x;
  }
  return std::nullopt;
}

inline Range stab_left_range(const Instance& in) { return {0.0, (2.0 * in.u_star + in.u_max) / 4.0}; }
inline Range stab_right_range(const Instance& in) { return {(2.0 * in.u_star + in.u_max) / 4.0, in.u_max}; }
inline Range inv_left_range(const Instance& in) { return {0.0, in.u_max / 4.0}; }
inline Range inv_right_range(const Instance& in) { return {in.u_max / 4.0, in.u_max}; }

inline Answer single_answer(std::optional<double> x, bool left) {
  Answer a;
  if (!x) return a;
  a.feasible = true;
  (left ? a.omega_a : a.omega_b) = *x;
  a.objective = *x * *x;
  return a;
}

inline Answer stab_left(const Instance& in) {
  const Potentials P{in.u_max, in.u_star};
  return single_answer(first_feasible([&](double s) { return P.g(s, in.u_b) <= -in.C; }, stab_left_range(in)), true);
}

inline Answer stab_right(const Instance& in) {
  const Potentials P{in.u_max, in.u_star};
  return single_answer(first_feasible([&](double z) { return P.g(in.u_a, z) <= -in.C; }, stab_right_range(in)),
                       false);
}

inline Answer inv_left(const Instance& in) {
  const Potentials P{in.u_max, in.u_star};
  return single_answer(first_feasible([&](double s) { return P.k(s, in.u_b) <= in.D; }, inv_left_range(in)), true);
}

inline Answer inv_right(const Instance& in) {
  const Potentials P{in.u_max, in.u_star};
  return single_answer(first_feasible([&](double z) { return P.k(in.u_a, z) <= in.D; }, inv_right_range(in)), false);
}

/// Minimal-norm pair: outer grid over the left range, inner first-feasible search over the right.
template <class Ok>
Answer pair_search(const Ok& ok, Range left, Range right, std::size_t n = kGridPoints) {
  Answer best;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = left.at(i, n);
    const auto z = first_feasible([&](double zz) { return ok(s, zz); }, right, n);
    if (!z) continue;
    const double obj = s * s + *z * *z;
    if (obj < best.objective) {
      best = {true, s, *z, obj};
    }
  }
  return best;
}

inline Answer stab_both(const Instance& in, std::size_t n = kGridPoints) {
  const Potentials P{in.u_max, in.u_star};
  return pair_search([&](double s, double z) { return P.g(s, z) <= -in.C; }, stab_left_range(in),
                     stab_right_range(in), n);
}

inline Answer inv_both(const Instance& in, std::size_t n = kGridPoints) {
  const Potentials P{in.u_max, in.u_star};
  return pair_search([&](double s, double z) { return P.k(s, z) <= in.D; }, inv_left_range(in), inv_right_range(in),
                     n);
}

/// Compound problems: a control is admissible if some partner grid point
/// satisfies the stability constraint and some (possibly different) partner
/// grid point satisfies the invariance constraint.
inline Answer compound_left(const Instance& in, std::size_t n = kGridPoints) {
  const Potentials P{in.u_max, in.u_star};
  const Range partners = inv_right_range(in);
  // g and k are written as (term in s) - (term in z); tabulate the partner terms once.
  std::vector<double> g_z(n), k_z(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double z = partners.at(j, n);
    g_z[j] = (z - in.u_star) * P.f(z) - P.F(z);
    k_z[j] = z * P.f(z) - P.F(z);
  }
  auto ok = [&](double s) {
    const double g_s = (s - in.u_star) * P.f(s) - P.F(s);
    const double k_s = s * P.f(s) - P.F(s);
    bool stable = false;
    bool safe = false;
    for (std::size_t j = 0; j < n && !(stable && safe); ++j) {
      stable = stable || g_s - g_z[j] <= -in.C;
      safe = safe || k_s - k_z[j] <= in.D;
    }
    return stable && safe;
  };
  return single_answer(first_feasible(ok, stab_left_range(in), n), true);
}

inline Answer compound_right(const Instance& in, std::size_t n = kGridPoints) {
  const Potentials P{in.u_max, in.u_star};
  const Range partners = stab_left_range(in);
  std::vector<double> g_s(n), k_s(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = partners.at(j, n);
    g_s[j] = (s - in.u_star) * P.f(s) - P.F(s);
    k_s[j] = s * P.f(s) - P.F(s);
  }
  auto ok = [&](double z) {
    const double g_z = (z - in.u_star) * P.f(z) - P.F(z);
    const double k_z = z * P.f(z) - P.F(z);
    bool stable = false;
    bool safe = false;
    for (std::size_t j = 0; j < n && !(stable && safe); ++j) {
      stable = stable || g_s[j] - g_z <= -in.C;
      safe = safe || k_s[j] - k_z <= in.D;
    }
    return stable && safe;
  };
  return single_answer(first_feasible(ok, inv_right_range(in), n), false);
}

/// Dispatch by solver name, as used by the CLI.
inline std::optional<Answer> run(const std::string& solver, const Instance& in) {
  if (solver == "solve_stab_left") return stab_left(in);
  if (solver == "solve_stab_right") return stab_right(in);
  if (solver == "solve_inv_left") return inv_left(in);
  if (solver == "solve_inv_right") return inv_right(in);
  if (solver == "solve_stab_both") return stab_both(in);
  if (solver == "solve_inv_both") return inv_both(in);
  if (solver == "solve_compound_left") return compound_left(in);
  if (solver == "solve_compound_right") return compound_right(in);
  return std::nullopt;
}

}  // namespace lwrctl::oracle
