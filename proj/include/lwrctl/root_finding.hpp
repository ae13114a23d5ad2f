#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lwrctl {

class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed density interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo_ <= hi_)) throw BracketError("Interval: lo must not exceed hi");
  }

  double width() const { return hi - lo; }
  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
  double clip(double x) const { return std::clamp(x, lo, hi); }
};

inline constexpr double kRootTol = 1e-12;

/// Which end of the final bisection bracket to return.
enum class RootSide {
  kMidpoint,
  kAtMost,   // fn(x) <= target
  kAtLeast,  // fn(x) >= target
};

/// Bisection on a monotone function whose values at the bracket ends straddle `target`.
inline double root_on_monotone(const std::function<double(double)>& fn, Interval bracket, double target,
                               double tol = kRootTol, RootSide side = RootSide::kMidpoint) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  double f_lo = fn(lo) - target;
  double f_hi = fn(hi) - target;
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream os;
    os << "root_on_monotone: bracket [" << lo << ", " << hi << "] does not straddle " << target;
    throw BracketError(os.str());
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = fn(mid) - target;
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  switch (side) {
    case RootSide::kAtMost: return f_lo <= 0.0 ? lo : hi;
    case RootSide::kAtLeast: return f_lo >= 0.0 ? lo : hi;
    case RootSide::kMidpoint: break;
  }
  return 0.5 * (lo + hi);
}

/// A scalar function together with knots between which it is monotone.
///
/// Extrema are attained at knots, so every query below is exact up to the
/// bisection tolerance.
class PiecewiseMonotone {
 public:
  PiecewiseMonotone(std::function<double(double)> fn, Interval domain, const std::vector<double>& interior)
      : fn_(std::move(fn)), domain_(domain) {
    knots_.push_back(domain.lo);
    for (double x : interior) {
      if (x > domain.lo && x < domain.hi) knots_.push_back(x);
    }
    knots_.push_back(domain.hi);
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
  }

  double operator()(double x) const { return fn_(x); }
  const std::vector<double>& knots() const { return knots_; }
  const Interval& domain() const { return domain_; }

  double min_value() const {
    double best = fn_(knots_.front());
    for (double x : knots_) best = std::min(best, fn_(x));
    return best;
  }
  double max_value() const {
    double best = fn_(knots_.front());
    for (double x : knots_) best = std::max(best, fn_(x));
    return best;
  }
  /// Smallest knot at which the minimum is attained.
  double argmin() const {
    double arg = knots_.front();
    double best = fn_(arg);
    for (double x : knots_) {
      if (fn_(x) < best) {
        best = fn_(x);
        arg = x;
      }
    }
    return arg;
  }

  /// Every x with fn(x) == target, one per monotone piece, returned on the side fn <= target.
  std::vector<double> roots_at_most(double target, double tol = kRootTol) const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      const double lo = knots_[i];
      const double hi = knots_[i + 1];
      const double f_lo = fn_(lo) - target;
      const double f_hi = fn_(hi) - target;
      if ((f_lo <= 0.0) == (f_hi <= 0.0) && f_lo != 0.0 && f_hi != 0.0) continue;
      const double x = root_on_monotone(fn_, Interval(lo, hi), target, tol, RootSide::kAtMost);
      if (out.empty() || out.back() != x) out.push_back(x);
    }
    return out;
  }

  /// Smallest x in the domain with fn(x) <= target.
  std::optional<double> first_at_most(double target, double tol = kRootTol) const {
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      const double lo = knots_[i];
      const double hi = knots_[i + 1];
      if (fn_(lo) <= target) return lo;
      if (fn_(hi) <= target) return root_on_monotone(fn_, Interval(lo, hi), target, tol, RootSide::kAtMost);
    }
    return std::nullopt;
  }

  /// Largest x in the domain with fn(x) <= target.
  std::optional<double> last_at_most(double target, double tol = kRootTol) const {
    for (std::size_t i = knots_.size() - 1; i > 0; --i) {
      const double lo = knots_[i - 1];
      const double hi = knots_[i];
      if (fn_(hi) <= target) return hi;
      if (fn_(lo) <= target) return root_on_monotone(fn_, Interval(lo, hi), target, tol, RootSide::kAtMost);
    }
    return std::nullopt;
  }

 private:
  std::function<double(double)> fn_;
  Interval domain_;
  std::vector<double> knots_;
};

}  // namespace lwrctl
