#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lwrctl/flux_model.hpp"

namespace lwrctl {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cell averages of the density on a uniform grid over [a, b] at one instant.
struct GridState {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> cells;
  double time = 0.0;

  std::size_t n_cells() const { return cells.size(); }
  double dx() const { return (b - a) / static_cast<double>(cells.size()); }
  double center(std::size_t i) const { return a + (static_cast<double>(i) + 0.5) * dx(); }
};

/// Commanded boundary densities, applied weakly through ghost cells.
struct BoundaryData {
  double omega_a = 0.0;
  double omega_b = 0.0;
};

/// Wave-speed floor used by cfl_dt for stationary data.
inline constexpr double kMinWaveSpeed = 1e-12;
inline constexpr double kDefaultCfl = 0.9;

inline GridState init_from_profile(double a, double b, std::size_t n_cells,
                                   const std::function<double(double)>& profile,
                                   const FluxModel& m) {
  if (!(b > a)) throw DomainError("init_from_profile: need a < b");
  if (n_cells < 2) throw DomainError("init_from_profile: need at least two cells");
  GridState state{a, b, std::vector<double>(n_cells), 0.0};
  for (std::size_t i = 0; i < n_cells; ++i) {
    state.cells[i] = m.checked(profile(state.center(i)));
  }
  return state;
}

inline double max_wave_speed(const GridState& state, const BoundaryData& bd, const FluxModel& m) {
  double speed = std::max(std::abs(m.speed(bd.omega_a)), std::abs(m.speed(bd.omega_b)));
  for (double u : state.cells) speed = std::max(speed, std::abs(m.speed(u)));
  return speed;
}

/// Largest stable time step, cfl * dx / max|f'|, capped at dt_max.
inline double cfl_dt(const GridState& state, const BoundaryData& bd, double cfl, const FluxModel& m,
                     double dt_max = std::numeric_limits<double>::infinity()) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw DomainError("cfl_dt: cfl must lie in (0, 1]");
  const double speed = std::max(max_wave_speed(state, bd, m), kMinWaveSpeed);
  return std::min(cfl * state.dx() / speed, dt_max);
}

/// Flows through the two boundary interfaces for the current state.
struct BoundaryFlux {
  double inflow = 0.0;   // through x = a, positive rightwards
  double outflow = 0.0;  // through x = b, positive rightwards
};

inline BoundaryFlux boundary_fluxes(const GridState& state, const BoundaryData& bd, const FluxModel& m) {
  return {godunov_flux(m, bd.omega_a, state.cells.front()),
          godunov_flux(m, state.cells.back(), bd.omega_b)};
}

/// One explicit Godunov step with ghost cells carrying the boundary data.
inline GridState step(const GridState& state, const BoundaryData& bd, double dt, const FluxModel& m) {
  const std::size_t n = state.n_cells();
  const double dx = state.dx();
  if (!(dt >= 0.0)) throw IntegrationError("step: negative time step");
  const double speed = max_wave_speed(state, bd, m);
  // Small relative slack so a dt produced by cfl_dt with cfl = 1 is accepted.
  if (dt * speed > dx * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "step: CFL violated (dt=" << dt << ", max speed=" << speed << ", dx=" << dx << ")";
    throw IntegrationError(os.str());
  }

  std::vector<double> interface(n + 1);
  interface[0] = godunov_flux(m, bd.omega_a, state.cells[0]);
  for (std::size_t i = 1; i < n; ++i) interface[i] = godunov_flux(m, state.cells[i - 1], state.cells[i]);
  interface[n] = godunov_flux(m, state.cells[n - 1], bd.omega_b);

  GridState next{state.a, state.b, std::vector<double>(n), state.time + dt};
  const double ratio = dt / dx;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = state.cells[i] - ratio * (interface[i + 1] - interface[i]);
    if (!m.contains(u)) {
      std::ostringstream os;
      os << "step: maximum principle violated in cell " << i << " (u=" << u << ")";
      throw IntegrationError(os.str());
    }
    next.cells[i] = m.checked(u);
  }
  return next;
}

/// Result of integrating over a control interval with held boundary data.
struct IntervalResult {
  GridState state;
  double inflow_integral = 0.0;   // time integral of the left boundary flux
  double outflow_integral = 0.0;  // time integral of the right boundary flux
  std::size_t substeps = 0;
};

/// Called after every substep with the states on both sides of it.
using SubstepObserver =
    std::function<void(const GridState& before, const GridState& after, double dt, const BoundaryFlux& flux)>;

inline IntervalResult integrate_interval(const GridState& state, const BoundaryData& bd, double horizon,
                                         double cfl, const FluxModel& m,
                                         double dt_max = std::numeric_limits<double>::infinity(),
                                         const SubstepObserver& observer = {}) {
  if (!(horizon > 0.0)) throw DomainError("advance_interval: horizon must be positive");
  IntervalResult out{state, 0.0, 0.0, 0};
  const double t0 = state.time;
  double elapsed = 0.0;
  while (horizon - elapsed > horizon * 1e-14) {
    const double dt = std::min(cfl_dt(out.state, bd, cfl, m, dt_max), horizon - elapsed);
    const BoundaryFlux flux = boundary_fluxes(out.state, bd, m);
    GridState next = step(out.state, bd, dt, m);
    if (observer) observer(out.state, next, dt, flux);
    out.state = std::move(next);
    out.inflow_integral += dt * flux.inflow;
    out.outflow_integral += dt * flux.outflow;
    elapsed += dt;
    ++out.substeps;
  }
  out.state.time = t0 + horizon;
  return out;
}

/// Advances by exactly `horizon` with the boundary data held constant.
inline GridState advance_interval(const GridState& state, const BoundaryData& bd, double horizon, double cfl,
                                  const FluxModel& m,
                                  double dt_max = std::numeric_limits<double>::infinity()) {
  return integrate_interval(state, bd, horizon, cfl, m, dt_max).state;
}

/// Boundary traces read as the first and last cell averages.
inline std::pair<double, double> boundary_traces(const GridState& state) {
  return {state.cells.front(), state.cells.back()};
}

inline double total_mass(const GridState& state) {
  double sum = 0.0;
  for (double u : state.cells) sum += u;
  return state.dx() * sum;
}

}  // namespace lwrctl
