// Command-line front end: run, validate, sweep and oracle subcommands.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lwrctl/lwrctl.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--out", flags.out, "Output directory (default: $LWR_OUT_DIR, then the config, then .)");
  cmd->add_option("--seed", flags.seed, "RNG seed stored in the config and used by random sweeps");
  cmd->add_flag("--quiet", flags.quiet, "Suppress progress output");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lwrctl::ConfigError("", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

nlohmann::json read_json(const std::string& path_or_inline) {
  const bool inline_json = !path_or_inline.empty() && path_or_inline.front() == '{';
  const std::string text = inline_json ? path_or_inline : read_text(path_or_inline);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = lwrctl::detail::line_col(text, e.byte);
    std::ostringstream os;
    os << "parse error at line " << line << ", column " << col << ": " << e.what();
    throw lwrctl::ConfigError("", os.str());
  }
}

std::filesystem::path resolve_out_dir(const CommonFlags& flags, const lwrctl::ScenarioConfig& cfg) {
  if (!flags.out.empty()) return flags.out;
  if (const char* env = std::getenv("LWR_OUT_DIR"); env && *env) return env;
  if (!cfg.output.dir.empty()) return cfg.output.dir;
  return ".";
}

void apply_seed(const CommonFlags& flags, lwrctl::ScenarioConfig& cfg) {
  if (flags.seed) cfg.seed = *flags.seed;
}

double min_barrier(const lwrctl::ScenarioRun& run) {
  double b = run.records.front().B;
  for (const auto& r : run.records) b = std::min(b, r.B);
  return b;
}

std::size_t fallback_steps(const lwrctl::ScenarioRun& run) {
  std::size_t n = 0;
  for (const auto& r : run.records) n += (!r.feasible_a || !r.feasible_b) ? 1 : 0;
  return n;
}

void summarize(std::ostream& os, const std::string& label, const lwrctl::ScenarioRun& run) {
  const auto& first = run.records.front();
  const auto& last = run.records.back();
  os << label << ": steps=" << run.records.size() << " V0=" << lwrctl::format_number(first.V)
     << " V_end=" << lwrctl::format_number(last.V) << " B_min=" << lwrctl::format_number(min_barrier(run))
     << " B_end=" << lwrctl::format_number(last.B) << " fallback_steps=" << fallback_steps(run) << "\n";
}

int cmd_validate(const std::string& path) {
  const lwrctl::ScenarioConfig cfg = lwrctl::load_config(path);
  std::cout << "config ok: mode=" << lwrctl::to_string(cfg.mode) << " n_cells=" << cfg.n_cells
            << " t_final=" << cfg.t_final << " control_dt=" << cfg.control_dt << "\n";
  return kExitOk;
}

int cmd_run(const std::string& path, const std::vector<std::string>& also, const CommonFlags& flags) {
  lwrctl::ScenarioConfig cfg = lwrctl::load_config(path);
  apply_seed(flags, cfg);
  std::vector<lwrctl::ScenarioConfig> configs{cfg};
  for (const std::string& name : also) {
    const auto mode = lwrctl::parse_mode(name);
    if (!mode) throw lwrctl::ConfigError("mode", "--also: unknown mode '" + name + "'");
    lwrctl::ScenarioConfig extra = cfg;
    extra.mode = *mode;
    configs.push_back(extra);
  }
  std::vector<lwrctl::ScenarioRun> runs;
  for (const auto& c : configs) runs.push_back(lwrctl::run_scenario(c));
  std::vector<const lwrctl::ScenarioRun*> views;
  for (const auto& r : runs) views.push_back(&r);
  const auto dir = resolve_out_dir(flags, cfg);
  const auto written = lwrctl::emit_plots(views, dir, cfg.output.prefix);
  if (!flags.quiet) {
    for (const auto& r : runs) summarize(std::cout, lwrctl::to_string(r.config.mode), r);
    std::cout << "wrote " << written.size() << " files to " << dir.string() << "\n";
  }
  return kExitOk;
}

std::vector<double> parse_values(const std::string& spec, std::uint64_t seed) {
  std::vector<double> values;
  if (spec.rfind("random:", 0) == 0) {
    // random:<count>:<lo>:<hi>
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(7));
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw lwrctl::ConfigError("values", "--values random:<count>:<lo>:<hi>");
    const auto count = static_cast<std::size_t>(std::stoul(parts[0]));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(std::stod(parts[1]), std::stod(parts[2]));
    for (std::size_t i = 0; i < count; ++i) values.push_back(dist(rng));
    return values;
  }
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw lwrctl::ConfigError("values", "--values: '" + item + "' is not a number");
    }
  }
  if (values.empty()) throw lwrctl::ConfigError("values", "--values: empty list");
  return values;
}

int cmd_sweep(const std::string& path, const std::string& param, const std::string& values_spec,
              const CommonFlags& flags) {
  nlohmann::json base = read_json(path);
  lwrctl::ScenarioConfig base_cfg = lwrctl::config_from_json(base);
  apply_seed(flags, base_cfg);
  const std::vector<double> values = parse_values(values_spec, base_cfg.seed);

  std::vector<lwrctl::ScenarioConfig> configs;
  for (double v : values) {
    nlohmann::json j = base;
    if (param == "n_cells") {
      j[param] = static_cast<long long>(std::llround(v));
    } else {
      j[param] = v;
    }
    lwrctl::ScenarioConfig cfg = lwrctl::config_from_json(j);
    cfg.seed = base_cfg.seed;
    cfg.output.prefix = base_cfg.output.prefix + "_" + param + "-" + lwrctl::format_number(v);
    configs.push_back(cfg);
  }

  const auto dir = resolve_out_dir(flags, base_cfg);
  std::vector<std::future<lwrctl::ScenarioRun>> jobs;
  for (const auto& cfg : configs) {
    jobs.push_back(std::async(std::launch::async, [cfg, dir] {
      lwrctl::ScenarioRun run = lwrctl::run_scenario(cfg);
      lwrctl::emit_plots({&run}, dir, cfg.output.prefix);
      return run;
    }));
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const lwrctl::ScenarioRun run = jobs[i].get();
    if (!flags.quiet) summarize(std::cout, param + "=" + lwrctl::format_number(values[i]), run);
  }
  return kExitOk;
}

void print_outcome(const std::string& label, const lwrctl::SynthesisOutcome& o) {
  std::cout << label << ": " << lwrctl::to_string(o.status) << " case=" << o.case_label;
  if (o.omega_a) std::cout << " omega_a=" << lwrctl::format_number(*o.omega_a);
  if (o.omega_b) std::cout << " omega_b=" << lwrctl::format_number(*o.omega_b);
  if (o.feasible()) std::cout << " objective=" << lwrctl::format_number(o.norm_squared());
  std::cout << "\n";
}

int cmd_oracle(const std::string& solver, const std::string& instance_arg) {
  const nlohmann::json j = read_json(instance_arg);
  if (!j.is_object()) throw lwrctl::ConfigError("", "instance must be a JSON object");
  lwrctl::oracle::Instance in;
  auto get = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = lwrctl::detail::number(j[key], key);
  };
  lwrctl::detail::reject_unknown(j, {"u_max", "u_star", "u_a", "u_b", "C", "D"}, "");
  get("u_max", in.u_max);
  get("u_star", in.u_star);
  get("u_a", in.u_a);
  get("u_b", in.u_b);
  get("C", in.C);
  get("D", in.D);

  const auto answer = lwrctl::oracle::run(solver, in);
  if (!answer) throw lwrctl::ConfigError("solver", "unknown solver '" + solver + "'");
  std::cout << "oracle " << solver << ": " << (answer->feasible ? "feasible" : "infeasible");
  if (answer->feasible) {
    if (!std::isnan(answer->omega_a)) std::cout << " omega_a=" << lwrctl::format_number(answer->omega_a);
    if (!std::isnan(answer->omega_b)) std::cout << " omega_b=" << lwrctl::format_number(answer->omega_b);
    std::cout << " objective=" << lwrctl::format_number(answer->objective);
  }
  std::cout << "\n";

  const lwrctl::FluxModel m(in.u_max);
  lwrctl::FunctionalParams p;
  p.u_star = in.u_star;
  p.validate(m);
  if (solver == "solve_stab_left") print_outcome("library", lwrctl::solve_stab_left(in.u_b, in.C, p, m));
  else if (solver == "solve_stab_right") print_outcome("library", lwrctl::solve_stab_right(in.u_a, in.C, p, m));
  else if (solver == "solve_inv_left") print_outcome("library", lwrctl::solve_inv_left(in.u_b, in.D, m));
  else if (solver == "solve_inv_right") print_outcome("library", lwrctl::solve_inv_right(in.u_a, in.D, m));
  else if (solver == "solve_stab_both") print_outcome("library", lwrctl::solve_stab_both(in.C, p, m));
  else if (solver == "solve_inv_both") print_outcome("library", lwrctl::solve_inv_both(in.D, m));
  else if (solver == "solve_compound_left") print_outcome("library", lwrctl::solve_compound_left(in.C, in.D, p, m).outcome);
  else print_outcome("library", lwrctl::solve_compound_right(in.C, in.D, p, m).outcome);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary control of LWR traffic flow: simulation and synthesis"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path;
  std::vector<std::string> also;
  auto* run = app.add_subcommand("run", "Simulate a scenario and emit CSV plus plot scripts");
  run->add_option("config", config_path, "Scenario JSON")->required();
  run->add_option("--also", also, "Additional modes to run on the same scenario and overlay");
  add_common(run, flags);

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario config");
  validate->add_option("config", config_path, "Scenario JSON")->required();

  std::string param;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "Batch runs varying one scalar config field");
  sweep->add_option("config", config_path, "Scenario JSON")->required();
  sweep->add_option("--param", param, "Config field to vary")->required();
  sweep->add_option("--values", values, "Comma-separated list or random:<count>:<lo>:<hi>")->required();
  add_common(sweep, flags);

  std::string solver;
  std::string instance;
  auto* oracle = app.add_subcommand("oracle", "Brute-force grid oracle for one synthesis instance");
  oracle->add_option("solver", solver, "Solver name, e.g. solve_stab_left")->required();
  oracle->add_option("instance", instance, "Instance JSON file or inline JSON object")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run) return cmd_run(config_path, also, flags);
    if (*validate) return cmd_validate(config_path);
    if (*sweep) return cmd_sweep(config_path, param, values, flags);
    if (*oracle) return cmd_oracle(solver, instance);
  } catch (const lwrctl::ConfigError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const lwrctl::DomainError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
