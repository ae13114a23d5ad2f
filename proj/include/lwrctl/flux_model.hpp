#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lwrctl {

/// Raised when a density (or another bounded quantity) leaves its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Densities that drift outside [0, u_max] by at most this much are clamped.
inline constexpr double kDensitySlack = 1e-12;

/// Greenshields flux f(u) = u (1 - u/u_max) with its primitive and derivative.
///
/// The primitive is normalized so that F(0) = 0. Every evaluation checks that
/// the density lies in [0, u_max] (up to kDensitySlack, which is clamped away).
class FluxModel {
 public:
  explicit FluxModel(double u_max = 1.0) : u_max_(u_max) {
    if (!(u_max > 0.0) || !std::isfinite(u_max)) {
      throw DomainError("FluxModel: u_max must be finite and strictly positive");
    }
  }

  double u_max() const { return u_max_; }
  /// Critical density, the unique maximizer of f.
  double critical() const { return 0.5 * u_max_; }
  double capacity() const { return 0.25 * u_max_; }

  /// Returns u clamped into [0, u_max] or throws if it is further out than the slack.
  double checked(double u) const {
    if (!(u >= -kDensitySlack && u <= u_max_ + kDensitySlack)) {
      std::ostringstream os;
      os << "density " << u << " outside [0, " << u_max_ << "]";
      throw DomainError(os.str());
    }
    return std::clamp(u, 0.0, u_max_);
  }

  bool contains(double u) const { return u >= -kDensitySlack && u <= u_max_ + kDensitySlack; }

  double flux(double u) const {
    u = checked(u);
    return u * (1.0 - u / u_max_);
  }

  double speed(double u) const {
    u = checked(u);
    return 1.0 - 2.0 * u / u_max_;
  }

  double primitive(double u) const {
    u = checked(u);
    return u * u * (0.5 - u / (3.0 * u_max_));
  }

  /// Maximal flow the left state can send through an interface.
  double demand(double u) const { return flux(std::min(checked(u), critical())); }
  /// Maximal flow the right state can receive.
  double supply(double u) const { return flux(std::max(checked(u), critical())); }

  /// Inverse of f' on [0, u_max]; valid for wave speeds in [-1, 1].
  double density_for_speed(double xi) const { return 0.5 * u_max_ * (1.0 - xi); }

 private:
  double u_max_;
};

inline double flux_eval(const FluxModel& m, double u) { return m.flux(u); }
inline double flux_deriv(const FluxModel& m, double u) { return m.speed(u); }
inline double flux_primitive(const FluxModel& m, double u) { return m.primitive(u); }

/// Godunov flux for a concave flux in demand/supply form.
inline double godunov_flux(const FluxModel& m, double u_left, double u_right) {
  return std::min(m.demand(u_left), m.supply(u_right));
}

/// Shock speed from the Rankine-Hugoniot condition (characteristic speed if the states coincide).
inline double shock_speed(const FluxModel& m, double u_left, double u_right) {
  if (u_left == u_right) return m.speed(u_left);
  return (m.flux(u_right) - m.flux(u_left)) / (u_right - u_left);
}

/// Entropy solution of the Riemann problem sampled at xi = x/t.
inline double exact_riemann_sample(const FluxModel& m, double u_left, double u_right, double xi) {
  u_left = m.checked(u_left);
  u_right = m.checked(u_right);
  if (u_left == u_right) return u_left;
  if (u_left < u_right) {
    return xi < shock_speed(m, u_left, u_right) ? u_left : u_right;
  }
  // rarefaction fan between f'(u_left) and f'(u_right)
  return std::clamp(m.density_for_speed(xi), u_right, u_left);
}

}  // namespace lwrctl
