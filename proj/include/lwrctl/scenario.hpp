#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lwrctl/flux_model.hpp"
#include "lwrctl/functionals.hpp"
#include "lwrctl/lwr_solver.hpp"
#include "lwrctl/synthesis_compound.hpp"
#include "lwrctl/synthesis_single.hpp"

namespace lwrctl {

/// Bad configuration; `field` names the offending key (empty for syntax errors).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what) : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Synthesis failed under the `error` fallback policy.
class SynthesisFailure : public std::runtime_error {
 public:
  SynthesisFailure(std::size_t step, const std::string& what) : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

enum class ControlMode {
  kUncontrolled,
  kStabilityLeft,
  kStabilityRight,
  kStabilityBoth,
  kInvarianceLeft,
  kInvarianceRight,
  kInvarianceBoth,
  kCompound,
};

enum class FallbackPolicy { kHoldPrevious, kBestEffort, kError };

inline const std::vector<std::pair<ControlMode, std::string>>& mode_names() {
  static const std::vector<std::pair<ControlMode, std::string>> names{
      {ControlMode::kUncontrolled, "uncontrolled"},        {ControlMode::kStabilityLeft, "stability-left"},
      {ControlMode::kStabilityRight, "stability-right"},   {ControlMode::kStabilityBoth, "stability-both"},
      {ControlMode::kInvarianceLeft, "invariance-left"},   {ControlMode::kInvarianceRight, "invariance-right"},
      {ControlMode::kInvarianceBoth, "invariance-both"},   {ControlMode::kCompound, "compound"},
  };
  return names;
}

inline std::string to_string(ControlMode mode) {
  for (const auto& [m, name] : mode_names()) {
    if (m == mode) return name;
  }
  return "unknown";
}

inline std::optional<ControlMode> parse_mode(const std::string& name) {
  for (const auto& [m, n] : mode_names()) {
    if (n == name) return m;
  }
  return std::nullopt;
}

inline std::string to_string(FallbackPolicy f) {
  switch (f) {
    case FallbackPolicy::kHoldPrevious: return "hold-previous";
    case FallbackPolicy::kBestEffort: return "best-effort";
    case FallbackPolicy::kError: return "error";
  }
  return "unknown";
}

struct InitialProfile {
  enum class Kind { kConstant, kSinusoid, kRiemann };
  Kind kind = Kind::kSinusoid;
  double value = 0.0;                    // constant
  std::optional<double> offset;          // sinusoid, defaults to u_star
  double amplitude = 0.2;
  double frequency = 1.0;
  double phase = 0.0;
  double u_left = 0.0;                   // riemann
  double u_right = 0.0;
  std::optional<double> x_split;         // defaults to the domain midpoint
};

struct OutputSpec {
  std::string dir;  // empty: resolved by the caller
  std::string prefix = "lwr";
  std::vector<double> snapshot_times{0.3, 1.5, 3.0, 4.5, 15.0, 30.0};
};

/// Full description of one closed-loop run. Defaults reproduce the reference
/// setup: unit road and density, u* = 1/3, u_bar = 1/4, 30 s horizon with a
/// 0.015 s control period.
struct ScenarioConfig {
  double a = 0.0;
  double b = 1.0;
  double u_max = 1.0;
  std::size_t n_cells = 200;
  double t_final = 30.0;
  double control_dt = 0.015;
  double cfl = kDefaultCfl;
  double dt_max = std::numeric_limits<double>::infinity();
  ControlMode mode = ControlMode::kStabilityLeft;
  FunctionalParams params;
  InitialProfile initial;
  FallbackPolicy fallback = FallbackPolicy::kBestEffort;
  /// Density held at a boundary the mode does not control; defaults to u_star.
  std::optional<double> hold_density;
  OutputSpec output;
  std::uint64_t seed = 0;

  FluxModel flux() const { return FluxModel(u_max); }
  double held() const { return hold_density.value_or(params.u_star); }
};

/// Evaluates the configured initial profile at x.
inline std::function<double(double)> profile_function(const ScenarioConfig& cfg) {
  const InitialProfile ip = cfg.initial;
  switch (ip.kind) {
    case InitialProfile::Kind::kConstant:
      return [v = ip.value](double) { return v; };
    case InitialProfile::Kind::kSinusoid: {
      const double offset = ip.offset.value_or(cfg.params.u_star);
      return [=](double x) {
        return offset + ip.amplitude * std::sin(2.0 * std::numbers::pi * ip.frequency * x + ip.phase);
      };
    }
    case InitialProfile::Kind::kRiemann: {
      const double split = ip.x_split.value_or(0.5 * (cfg.a + cfg.b));
      return [=](double x) { return x < split ? ip.u_left : ip.u_right; };
    }
  }
  return [](double) { return 0.0; };
}

/// Throws ConfigError naming the first field that breaks an invariant.
inline void validate_config(const ScenarioConfig& cfg) {
  auto fail = [](const std::string& field, const std::string& why) { throw ConfigError(field, field + ": " + why); };
  auto density = [&](const std::string& field, double v) {
    if (!(v >= 0.0 && v <= cfg.u_max)) fail(field, "must lie in [0, u_max]");
  };
  if (!(cfg.u_max > 0.0) || !std::isfinite(cfg.u_max)) fail("u_max", "must be finite and positive");
  if (!(cfg.b > cfg.a)) fail("b", "must exceed a");
  if (cfg.n_cells < 2) fail("n_cells", "must be at least 2");
  if (!(cfg.t_final > 0.0) || !std::isfinite(cfg.t_final)) fail("t_final", "must be positive");
  if (!(cfg.control_dt > 0.0) || !std::isfinite(cfg.control_dt)) fail("control_dt", "must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) fail("cfl", "must lie in (0, 1]");
  if (!(cfg.dt_max > 0.0)) fail("dt_max", "must be positive");
  density("u_star", cfg.params.u_star);
  density("u_bar", cfg.params.u_bar);
  if (!(cfg.params.alpha_gain > 0.0)) fail("alpha_gain", "must be positive");
  if (!(cfg.params.beta_gain > 0.0)) fail("beta_gain", "must be positive");
  if (!(cfg.params.c_cap > 0.0)) fail("c_cap", "must be positive");
  if (!(cfg.params.d_cap > 0.0)) fail("d_cap", "must be positive");
  if (cfg.hold_density) density("hold_density", *cfg.hold_density);

  const InitialProfile& ip = cfg.initial;
  switch (ip.kind) {
    case InitialProfile::Kind::kConstant: density("initial.value", ip.value); break;
    case InitialProfile::Kind::kSinusoid: {
      const double offset = ip.offset.value_or(cfg.params.u_star);
      density("initial.offset", offset);
      if (!(offset - std::abs(ip.amplitude) >= 0.0 && offset + std::abs(ip.amplitude) <= cfg.u_max)) {
        fail("initial.amplitude", "offset +/- amplitude must stay within [0, u_max]");
      }
      if (!std::isfinite(ip.frequency)) fail("initial.frequency", "must be finite");
      if (!std::isfinite(ip.phase)) fail("initial.phase", "must be finite");
      break;
    }
    case InitialProfile::Kind::kRiemann:
      density("initial.u_left", ip.u_left);
      density("initial.u_right", ip.u_right);
      if (ip.x_split && !(*ip.x_split >= cfg.a && *ip.x_split <= cfg.b)) fail("initial.x_split", "must lie in [a, b]");
      break;
  }
  for (double t : cfg.output.snapshot_times) {
    if (!(t >= 0.0)) fail("output.snapshot_times", "times must be nonnegative");
  }
}

namespace detail {

inline double number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, field + ": expected a number");
  return j.get<double>();
}

/// Accepts a number or null (meaning +infinity).
inline double number_or_inf(const nlohmann::json& j, const std::string& field) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return number(j, field);
}

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& known, const std::string& scope) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) {
      const std::string field = scope.empty() ? it.key() : scope + "." + it.key();
      throw ConfigError(field, field + ": unknown field");
    }
  }
}

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

/// Builds a validated config from a parsed JSON object; absent fields keep their defaults.
inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  using detail::number;
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  detail::reject_unknown(j,
                         {"a", "b", "u_max", "n_cells", "t_final", "control_dt", "cfl", "dt_max", "mode", "u_star",
                          "u_bar", "alpha_gain", "beta_gain", "c_cap", "d_cap", "initial", "fallback", "hold_density",
                          "output", "seed"},
                         "");
  ScenarioConfig cfg;
  if (j.contains("a")) cfg.a = number(j["a"], "a");
  if (j.contains("b")) cfg.b = number(j["b"], "b");
  if (j.contains("u_max")) cfg.u_max = number(j["u_max"], "u_max");
  if (j.contains("n_cells")) {
    if (!j["n_cells"].is_number_integer() || j["n_cells"].get<long long>() < 0) {
      throw ConfigError("n_cells", "n_cells: expected a nonnegative integer");
    }
    cfg.n_cells = j["n_cells"].get<std::size_t>();
  }
  if (j.contains("t_final")) cfg.t_final = number(j["t_final"], "t_final");
  if (j.contains("control_dt")) cfg.control_dt = number(j["control_dt"], "control_dt");
  if (j.contains("cfl")) cfg.cfl = number(j["cfl"], "cfl");
  if (j.contains("dt_max")) cfg.dt_max = detail::number_or_inf(j["dt_max"], "dt_max");
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw ConfigError("mode", "mode: expected a string");
    const auto mode = parse_mode(j["mode"].get<std::string>());
    if (!mode) throw ConfigError("mode", "mode: unknown mode '" + j["mode"].get<std::string>() + "'");
    cfg.mode = *mode;
  }
  if (j.contains("u_star")) cfg.params.u_star = number(j["u_star"], "u_star");
  if (j.contains("u_bar")) cfg.params.u_bar = number(j["u_bar"], "u_bar");
  if (j.contains("alpha_gain")) cfg.params.alpha_gain = number(j["alpha_gain"], "alpha_gain");
  if (j.contains("beta_gain")) cfg.params.beta_gain = number(j["beta_gain"], "beta_gain");
  if (j.contains("c_cap")) cfg.params.c_cap = detail::number_or_inf(j["c_cap"], "c_cap");
  if (j.contains("d_cap")) cfg.params.d_cap = detail::number_or_inf(j["d_cap"], "d_cap");
  if (j.contains("hold_density")) cfg.hold_density = number(j["hold_density"], "hold_density");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "seed: expected a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("fallback")) {
    const auto& f = j["fallback"];
    const std::string name = f.is_string() ? f.get<std::string>() : "";
    if (name == "hold-previous") cfg.fallback = FallbackPolicy::kHoldPrevious;
    else if (name == "best-effort") cfg.fallback = FallbackPolicy::kBestEffort;
    else if (name == "error") cfg.fallback = FallbackPolicy::kError;
    else throw ConfigError("fallback", "fallback: expected hold-previous, best-effort or error");
  }
  if (j.contains("initial")) {
    const auto& ij = j["initial"];
    if (!ij.is_object() || !ij.contains("kind") || !ij["kind"].is_string()) {
      throw ConfigError("initial.kind", "initial.kind: expected constant, sinusoid or riemann");
    }
    const std::string kind = ij["kind"].get<std::string>();
    InitialProfile ip;
    if (kind == "constant") {
      detail::reject_unknown(ij, {"kind", "value"}, "initial");
      ip.kind = InitialProfile::Kind::kConstant;
      if (!ij.contains("value")) throw ConfigError("initial.value", "initial.value: required for constant profiles");
      ip.value = number(ij["value"], "initial.value");
    } else if (kind == "sinusoid") {
      detail::reject_unknown(ij, {"kind", "offset", "amplitude", "frequency", "phase"}, "initial");
      ip.kind = InitialProfile::Kind::kSinusoid;
      if (ij.contains("offset")) ip.offset = number(ij["offset"], "initial.offset");
      if (ij.contains("amplitude")) ip.amplitude = number(ij["amplitude"], "initial.amplitude");
      if (ij.contains("frequency")) ip.frequency = number(ij["frequency"], "initial.frequency");
      if (ij.contains("phase")) ip.phase = number(ij["phase"], "initial.phase");
    } else if (kind == "riemann") {
      detail::reject_unknown(ij, {"kind", "u_left", "u_right", "x_split"}, "initial");
      ip.kind = InitialProfile::Kind::kRiemann;
      if (!ij.contains("u_left") || !ij.contains("u_right")) {
        throw ConfigError("initial.u_left", "initial: riemann profiles need u_left and u_right");
      }
      ip.u_left = number(ij["u_left"], "initial.u_left");
      ip.u_right = number(ij["u_right"], "initial.u_right");
      if (ij.contains("x_split")) ip.x_split = number(ij["x_split"], "initial.x_split");
    } else {
      throw ConfigError("initial.kind", "initial.kind: unknown profile '" + kind + "'");
    }
    cfg.initial = ip;
  }
  if (j.contains("output")) {
    const auto& oj = j["output"];
    if (!oj.is_object()) throw ConfigError("output", "output: expected an object");
    detail::reject_unknown(oj, {"dir", "prefix", "snapshot_times"}, "output");
    if (oj.contains("dir")) {
      if (!oj["dir"].is_string()) throw ConfigError("output.dir", "output.dir: expected a string");
      cfg.output.dir = oj["dir"].get<std::string>();
    }
    if (oj.contains("prefix")) {
      if (!oj["prefix"].is_string()) throw ConfigError("output.prefix", "output.prefix: expected a string");
      cfg.output.prefix = oj["prefix"].get<std::string>();
    }
    if (oj.contains("snapshot_times")) {
      if (!oj["snapshot_times"].is_array()) {
        throw ConfigError("output.snapshot_times", "output.snapshot_times: expected an array");
      }
      cfg.output.snapshot_times.clear();
      for (const auto& t : oj["snapshot_times"]) cfg.output.snapshot_times.push_back(number(t, "output.snapshot_times"));
    }
  }
  validate_config(cfg);
  return cfg;
}

/// Parses JSON text; syntax errors carry line and column.
inline ScenarioConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_col(text, e.byte);
    std::ostringstream os;
    os << "parse error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError("", os.str());
  }
  return config_from_json(j);
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

/// Quantities logged at one control step.
struct TimeSeriesRecord {
  double time = 0.0;
  double V = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double omega_a = 0.0;  // commanded
  double omega_b = 0.0;
  double trace_a = 0.0;  // attained (first / last cell average)
  double trace_b = 0.0;
  bool feasible_a = true;  // false: the left command came from the fallback policy
  bool feasible_b = true;
  double mass = 0.0;
};

struct Snapshot {
  double requested_time = 0.0;
  double time = 0.0;
  std::vector<double> x;
  std::vector<double> density;
};

/// Records, snapshots and the mass audit of one run.
struct ScenarioRun {
  ScenarioConfig config;
  std::vector<TimeSeriesRecord> records;
  std::vector<Snapshot> snapshots;
  double initial_mass = 0.0;
  double final_mass = 0.0;
  double inflow_integral = 0.0;
  double outflow_integral = 0.0;
  std::size_t substeps = 0;
};

namespace detail {

/// Point of `range` minimizing `violation`, from the knots plus a uniform scan.
template <class Fn>
double least_violation(Fn violation, Interval range, std::initializer_list<double> knots, std::size_t n = 512) {
  double best_x = range.lo;
  double best_v = violation(range.lo);
  auto consider = [&](double x) {
    x = range.clip(x);
    const double v = violation(x);
    if (v < best_v || (v == best_v && x < best_x)) {
      best_v = v;
      best_x = x;
    }
  };
  for (double k : knots) consider(k);
  for (std::size_t i = 0; i < n; ++i) consider(range.lo + range.width() * static_cast<double>(i) / (n - 1));
  return best_x;
}

struct Command {
  double omega_a;
  double omega_b;
  bool feasible_a = true;
  bool feasible_b = true;
};

/// Least-violation commands used by the best-effort policy.
inline Command best_effort(ControlMode mode, double C, double D,
                           const FunctionalParams& p, const FluxModel& m, const Command& fallback) {
  auto h = [&](double x) { return stability_potential(x, p, m); };
  auto mt = [&](double x) { return invariance_potential(x, m); };
  const double delta = p.delta(m);
  const double gamma = p.gamma(m);
  const double u_hat = m.critical();
  Command c = fallback;
  switch (mode) {
    case ControlMode::kStabilityLeft:
    case ControlMode::kStabilityRight:
    case ControlMode::kStabilityBoth:
      c.omega_a = least_violation(h, stability_left_interval(p, m), {delta, gamma});
      c.omega_b = least_violation([&](double z) { return -h(z); }, stability_right_interval(p, m), {delta, gamma});
      break;
    case ControlMode::kInvarianceLeft:
    case ControlMode::kInvarianceRight:
    case ControlMode::kInvarianceBoth:
      c.omega_a = least_violation(mt, invariance_left_interval(m), {u_hat});
      c.omega_b = least_violation([&](double z) { return -mt(z); }, invariance_right_interval(m), {u_hat});
      break;
    case ControlMode::kCompound:
      c.omega_a = least_violation(
          [&](double s) {
            return std::max(partner_min_g_over_Ib(s, p, m).value + C, partner_min_k_over_Ib(s, m).value - D);
          },
          stability_left_interval(p, m), {delta, gamma, u_hat});
      c.omega_b = least_violation(
          [&](double z) {
            return std::max(partner_min_g_over_Ca(z, p, m).value + C, partner_min_k_over_Ca(z, p, m).value - D);
          },
          invariance_right_interval(m), {delta, gamma, u_hat});
      break;
    case ControlMode::kUncontrolled: break;
  }
  return c;
}

}  // namespace detail

/// Closed loop: at every control step read the traces, evaluate V, B and the
/// budgets, synthesize the commands for the configured mode, then integrate
/// over one control period with the commands held.
inline ScenarioRun run_scenario(const ScenarioConfig& cfg, const SubstepObserver& observer = {}) {
  validate_config(cfg);
  const FluxModel m = cfg.flux();
  const FunctionalParams& p = cfg.params;

  ScenarioRun run;
  run.config = cfg;
  GridState state = init_from_profile(cfg.a, cfg.b, cfg.n_cells, profile_function(cfg), m);
  run.initial_mass = total_mass(state);

  const auto [a0, b0] = boundary_traces(state);
  detail::Command previous{a0, b0};
  if (cfg.mode != ControlMode::kUncontrolled) {
    const double hold = cfg.held();
    switch (cfg.mode) {
      case ControlMode::kStabilityLeft:
      case ControlMode::kInvarianceLeft: previous.omega_b = hold; break;
      case ControlMode::kStabilityRight:
      case ControlMode::kInvarianceRight: previous.omega_a = hold; break;
      default: break;
    }
  }

  std::vector<double> pending = cfg.output.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snapshot = 0;
  const double time_eps = 1e-9 * cfg.control_dt;

  const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_final / cfg.control_dt - 1e-9));
  run.records.reserve(n_steps + 1);

  for (std::size_t k = 0;; ++k) {
    const auto [trace_a, trace_b] = boundary_traces(state);
    TimeSeriesRecord rec;
    rec.time = state.time;
    rec.V = lyapunov_v(state, p);
    rec.B = barrier_b(state, p);
    rec.C = budget_c(rec.V, p);
    rec.D = budget_d(rec.B, p);
    rec.trace_a = trace_a;
    rec.trace_b = trace_b;
    rec.mass = total_mass(state);

    detail::Command cmd = previous;
    cmd.feasible_a = cmd.feasible_b = true;
    auto take_left = [&](const SynthesisOutcome& o) {
      if (o.feasible()) cmd.omega_a = *o.omega_a;
      cmd.feasible_a = o.feasible();
    };
    auto take_right = [&](const SynthesisOutcome& o) {
      if (o.feasible()) cmd.omega_b = *o.omega_b;
      cmd.feasible_b = o.feasible();
    };
    switch (cfg.mode) {
      case ControlMode::kUncontrolled: break;
      case ControlMode::kStabilityLeft: take_left(solve_stab_left(trace_b, rec.C, p, m)); break;
      case ControlMode::kStabilityRight: take_right(solve_stab_right(trace_a, rec.C, p, m)); break;
      case ControlMode::kInvarianceLeft: take_left(solve_inv_left(trace_b, rec.D, m)); break;
      case ControlMode::kInvarianceRight: take_right(solve_inv_right(trace_a, rec.D, m)); break;
      case ControlMode::kStabilityBoth: {
        const SynthesisOutcome o = solve_stab_both(rec.C, p, m);
        take_left(o);
        take_right(o);
        break;
      }
      case ControlMode::kInvarianceBoth: {
        const SynthesisOutcome o = solve_inv_both(rec.D, m);
        take_left(o);
        take_right(o);
        break;
      }
      case ControlMode::kCompound:
        // Each side is applied on its own, so the invariance command goes out
        // even when the stability side is infeasible.
        take_left(solve_compound_left(rec.C, rec.D, p, m).outcome);
        take_right(solve_compound_right(rec.C, rec.D, p, m).outcome);
        break;
    }

    if (!cmd.feasible_a || !cmd.feasible_b) {
      switch (cfg.fallback) {
        case FallbackPolicy::kHoldPrevious: break;
        case FallbackPolicy::kBestEffort: {
          const detail::Command be = detail::best_effort(cfg.mode, rec.C, rec.D, p, m, previous);
          if (!cmd.feasible_a) cmd.omega_a = be.omega_a;
          if (!cmd.feasible_b) cmd.omega_b = be.omega_b;
          break;
        }
        case FallbackPolicy::kError: {
          std::ostringstream os;
          os << "synthesis infeasible at step " << k << " (t=" << state.time << ") in mode " << to_string(cfg.mode);
          throw SynthesisFailure(k, os.str());
        }
      }
    }
    rec.omega_a = cmd.omega_a;
    rec.omega_b = cmd.omega_b;
    rec.feasible_a = cmd.feasible_a;
    rec.feasible_b = cmd.feasible_b;
    run.records.push_back(rec);
    previous = cmd;

    while (next_snapshot < pending.size() && pending[next_snapshot] <= state.time + time_eps) {
      Snapshot snap{pending[next_snapshot], state.time, {}, state.cells};
      for (std::size_t i = 0; i < state.n_cells(); ++i) snap.x.push_back(state.center(i));
      run.snapshots.push_back(std::move(snap));
      ++next_snapshot;
    }

    if (k == n_steps) break;
    const double t_next = std::min(static_cast<double>(k + 1) * cfg.control_dt, cfg.t_final);
    const double horizon = t_next - state.time;
    try {
      const IntervalResult r =
          integrate_interval(state, BoundaryData{cmd.omega_a, cmd.omega_b}, horizon, cfg.cfl, m, cfg.dt_max, observer);
      state = r.state;
      state.time = t_next;
      run.inflow_integral += r.inflow_integral;
      run.outflow_integral += r.outflow_integral;
      run.substeps += r.substeps;
    } catch (const IntegrationError& e) {
      std::ostringstream os;
      os << "integration failed at step " << k << ": " << e.what();
      throw IntegrationError(os.str());
    }
  }
  run.final_mass = total_mass(state);
  return run;
}

}  // namespace lwrctl
