#include "tamedsde/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tamedsde/checker.hpp"
#include "tamedsde/estimators.hpp"
#include "tamedsde/schemes.hpp"

namespace tamedsde {

using nlohmann::json;

Command command_from_string(const std::string& name) {
  if (name == "convergence") return Command::convergence;
  if (name == "moments") return Command::moments;
  if (name == "stopping") return Command::stopping;
  if (name == "diverge") return Command::diverge;
  if (name == "check") return Command::check;
  throw std::invalid_argument("unknown command: " + name);
}

std::string to_string(Command command) {
  switch (command) {
    case Command::convergence: return "convergence";
    case Command::moments: return "moments";
    case Command::stopping: return "stopping";
    case Command::diverge: return "diverge";
    case Command::check: return "check";
  }
  return "unknown";
}

SingularProblem build_problem(const ProblemSpec& spec) {
  if (spec.kind == "power_law") {
    const double x0 = spec.x0.empty() ? 1.0 : spec.x0.at(0);
    if (!spec.x0.empty() && spec.x0.size() != 1)
      throw std::invalid_argument("power_law: x0 must be 1-dimensional");
    return make_power_law(spec.alpha, x0);
  }
  if (spec.kind == "lj_pair") {
    std::vector<double> x0 = spec.x0.empty() ? std::vector<double>{0.0, 1.0} : spec.x0;
    return make_lennard_jones_pair(spec.lj, x0);
  }
  if (spec.kind == "brownian") {
    std::vector<double> x0 =
        spec.x0.empty() ? std::vector<double>(static_cast<std::size_t>(spec.dimension), 0.0)
                        : spec.x0;
    return make_smooth_sanity(SmoothKind::brownian, static_cast<int>(x0.size()), x0);
  }
  if (spec.kind == "ou") {
    std::vector<double> x0 =
        spec.x0.empty() ? std::vector<double>(static_cast<std::size_t>(spec.dimension), 1.0)
                        : spec.x0;
    return make_smooth_sanity(SmoothKind::ornstein_uhlenbeck, static_cast<int>(x0.size()), x0,
                              spec.ou_lambda);
  }
  throw std::invalid_argument("unknown problem kind: " + spec.kind);
}

double ExperimentConfig::resolved_w(const SingularProblem& problem) const {
  if (w_exp) return *w_exp;
  const double l = problem.constants().l;
  return (problem.has_singularity() && l > 0.0) ? 1.0 / (3.0 * l) : 0.0;
}

std::int64_t ExperimentConfig::resolved_samples() const {
  if (samples) return *samples;
  return (command == Command::stopping || command == Command::diverge) ? 10000 : 1000;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

json problem_to_json(const ProblemSpec& spec) {
  json j;
  j["kind"] = spec.kind;
  if (spec.kind == "power_law") j["alpha"] = spec.alpha;
  if (spec.kind == "lj_pair") {
    j["a1"] = spec.lj.a1;
    j["a2"] = spec.lj.a2;
    j["p"] = spec.lj.p_exp;
    j["q"] = spec.lj.q_exp;
    j["lambda"] = spec.lj.lambda;
  }
  if (spec.kind == "ou") j["ou_lambda"] = spec.ou_lambda;
  if (spec.kind == "ou" || spec.kind == "brownian") j["dimension"] = spec.dimension;
  if (!spec.x0.empty()) j["x0"] = spec.x0;
  return j;
}

ProblemSpec problem_from_json(const json& j) {
  ProblemSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (j.contains("alpha")) spec.alpha = j["alpha"].get<double>();
  if (j.contains("a1")) spec.lj.a1 = j["a1"].get<double>();
  if (j.contains("a2")) spec.lj.a2 = j["a2"].get<double>();
  if (j.contains("p")) spec.lj.p_exp = j["p"].get<double>();
  if (j.contains("q")) spec.lj.q_exp = j["q"].get<double>();
  if (j.contains("lambda")) spec.lj.lambda = j["lambda"].get<double>();
  if (j.contains("ou_lambda")) spec.ou_lambda = j["ou_lambda"].get<double>();
  if (j.contains("dimension")) spec.dimension = j["dimension"].get<int>();
  if (j.contains("x0")) spec.x0 = j["x0"].get<std::vector<double>>();
  return spec;
}

json config_to_json_object(const ExperimentConfig& config) {
  json j;
  j["command"] = to_string(config.command);
  j["problem"] = problem_to_json(config.problem);
  j["T"] = config.horizon;
  j["delta"] = config.delta;
  if (config.w_exp) j["w"] = *config.w_exp;
  j["taming"] = config.taming;
  j["levels"] = config.levels;
  j["p"] = config.p_order;
  if (config.samples) j["samples"] = *config.samples;
  j["seed"] = config.seed;
  j["n_ref_multiplier"] = config.n_ref_multiplier;
  j["pairs"] = config.pairs;
  j["grid_points"] = config.grid_points;
  j["rho_min"] = config.rho_min;
  j["out"] = config.out;
  j["threads"] = config.threads;
  return j;
}

ExperimentConfig config_from_json_object(const json& j) {
  ExperimentConfig config;
  if (j.contains("command")) config.command = command_from_string(j["command"].get<std::string>());
  if (j.contains("problem")) config.problem = problem_from_json(j["problem"]);
  if (j.contains("T")) config.horizon = j["T"].get<double>();
  if (j.contains("delta")) config.delta = j["delta"].get<double>();
  if (j.contains("w")) config.w_exp = j["w"].get<double>();
  if (j.contains("taming")) config.taming = j["taming"].get<bool>();
  if (j.contains("levels")) config.levels = j["levels"].get<std::vector<std::int64_t>>();
  if (j.contains("p")) config.p_order = j["p"].get<double>();
  if (j.contains("samples")) config.samples = j["samples"].get<std::int64_t>();
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("n_ref_multiplier"))
    config.n_ref_multiplier = j["n_ref_multiplier"].get<std::int64_t>();
  if (j.contains("pairs")) config.pairs = j["pairs"].get<std::int64_t>();
  if (j.contains("grid_points")) config.grid_points = j["grid_points"].get<std::int64_t>();
  if (j.contains("rho_min")) config.rho_min = j["rho_min"].get<double>();
  if (j.contains("out")) config.out = j["out"].get<std::string>();
  if (j.contains("threads")) config.threads = j["threads"].get<int>();
  return config;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

std::string csv_quote(const std::string& field) {
  bool needs_quote = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quote) return field;
  std::string quoted = "\"";
  for (const char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

SchemeConfig scheme_from(const ExperimentConfig& config, const SingularProblem& problem) {
  SchemeConfig scheme;
  scheme.horizon = config.horizon;
  scheme.delta = config.delta;
  scheme.w_exp = config.resolved_w(problem);
  scheme.taming = config.taming;
  scheme.steps = config.levels.empty() ? 64 : config.levels.front();
  return scheme;
}

MonteCarloConfig monte_carlo_from(const ExperimentConfig& config) {
  MonteCarloConfig mc;
  mc.samples = config.resolved_samples();
  mc.master_seed = config.seed;
  mc.n_ref_multiplier = config.n_ref_multiplier;
  mc.threads = config.threads;
  return mc;
}

std::string run_convergence(const ExperimentConfig& config, const SingularProblem& problem) {
  const SchemeConfig scheme = scheme_from(config, problem);
  const MonteCarloConfig mc = monte_carlo_from(config);
  const std::vector<ErrorEstimate> estimates =
      strong_error_curve(problem, scheme, config.levels, config.p_order, mc);

  std::ostringstream csv;
  csv << "n,p,mean_sup_error_p,root_error,std_error,samples,discarded\n";
  for (const ErrorEstimate& e : estimates) {
    csv << e.steps << ',' << format_double(e.p_order) << ','
        << format_double(e.mean_sup_error_p) << ',' << format_double(e.root_error) << ','
        << format_double(e.std_error) << ',' << e.samples << ',' << e.discarded << '\n';
  }
  // Levels too close to the reference carry mostly self-comparison bias;
  // keep them out of the fit.
  const std::int64_t n_ref = mc.n_ref_multiplier * config.levels.back();
  std::vector<ErrorEstimate> fitted;
  for (const ErrorEstimate& e : estimates)
    if (e.steps * 4 <= n_ref) fitted.push_back(e);
  const RateFit fit = fit_rate(fitted);
  csv << "slope,intercept,r_squared\n";
  csv << format_double(fit.slope) << ',' << format_double(fit.intercept) << ','
      << format_double(fit.r_squared) << '\n';
  return csv.str();
}

std::string run_moments(const ExperimentConfig& config, const SingularProblem& problem) {
  const SchemeConfig scheme = scheme_from(config, problem);
  const MonteCarloConfig mc = monte_carlo_from(config);
  const std::vector<MomentEstimate> estimates =
      inverse_moment_curve(problem, scheme, config.levels, config.p_order, mc);

  std::ostringstream csv;
  csv << "n,p,mean_sup_inv_rho_p,std_error,samples\n";
  double max_mean = 0.0;
  for (const MomentEstimate& e : estimates) {
    max_mean = std::max(max_mean, e.mean_sup_inv_rho_p);
    csv << e.steps << ',' << format_double(e.p_order) << ','
        << format_double(e.mean_sup_inv_rho_p) << ',' << format_double(e.std_error) << ','
        << e.samples << '\n';
  }
  csv << "max_level_mean\n" << format_double(max_mean) << '\n';
  return csv.str();
}

std::string run_stopping(const ExperimentConfig& config, const SingularProblem& problem) {
  const SchemeConfig scheme = scheme_from(config, problem);
  const MonteCarloConfig mc = monte_carlo_from(config);
  const std::vector<StoppingEstimate> estimates =
      stopping_probability(problem, scheme, config.levels, mc);

  std::ostringstream csv;
  csv << "n,fraction,std_error,samples\n";
  for (const StoppingEstimate& e : estimates) {
    csv << e.steps << ',' << format_double(e.fraction) << ',' << format_double(e.std_error)
        << ',' << e.samples << '\n';
  }
  return csv.str();
}

std::string run_diverge(const ExperimentConfig& config, const SingularProblem& problem) {
  SchemeConfig scheme = scheme_from(config, problem);
  scheme.taming = false;
  scheme.steps = config.levels.empty() ? 64 : config.levels.front();
  const MonteCarloConfig mc = monte_carlo_from(config);
  const DivergenceReport report = divergence_probe(problem, scheme, mc);

  std::ostringstream csv;
  csv << "fraction_left_domain,fraction_non_finite,max_observed_norm,samples\n";
  csv << format_double(report.fraction_left_domain) << ','
      << format_double(report.fraction_non_finite) << ','
      << format_double(report.max_observed_norm) << ',' << report.samples << '\n';
  return csv.str();
}

void append_report(std::ostringstream& csv, const CheckReport& report) {
  std::string witness;
  for (std::size_t i = 0; i < report.witness.size(); ++i) {
    if (i > 0) witness += ' ';
    witness += format_double(report.witness[i]);
  }
  csv << to_string(report.assumption_id) << ',' << (report.passed ? "true" : "false") << ','
      << format_double(report.worst_margin) << ','
      << (report.implied_constant ? format_double(*report.implied_constant) : std::string())
      << ','
      << (report.implied_exponent ? format_double(*report.implied_exponent) : std::string())
      << ',' << csv_quote(witness) << '\n';
}

std::string run_check(const ExperimentConfig& config, const SingularProblem& problem) {
  std::ostringstream csv;
  csv << "assumption_id,passed,worst_margin,implied_constant,implied_exponent,witness\n";

  const StructuralConstants& constants = problem.constants();
  if (config.problem.kind == "power_law") {
    const SampleBox log_box{{config.rho_min}, {3.0}, true};
    const std::vector<double> grid = log_spaced_grid(config.rho_min, 3.0, config.grid_points);
    append_report(csv, check_one_sided_lipschitz(problem, log_box, config.pairs, constants.c,
                                                 config.seed));
    append_report(csv, check_push_away(problem, grid, constants));
    append_report(csv, check_hess_rho_bound(problem, grid, constants));
    append_report(csv,
                  check_inv_poly_lipschitz(problem, log_box, config.pairs, constants, config.seed));
  } else if (config.problem.kind == "lj_pair") {
    const SampleBox box{{0.5, 0.75}, {2.75, 3.0}, false};
    // grid of pair states at log-spaced separations, centered at the origin
    const std::vector<double> radii = log_spaced_grid(config.rho_min, 3.0, config.grid_points);
    std::vector<double> grid;
    grid.reserve(radii.size() * 2);
    for (const double rho : radii) {
      const double half = rho / std::sqrt(2.0);
      grid.push_back(-half);
      grid.push_back(half);
    }
    append_report(csv, check_one_sided_lipschitz(problem, box, config.pairs, constants.c,
                                                 config.seed));
    append_report(csv, check_push_away(problem, grid, constants));
    append_report(csv, check_hess_rho_bound(problem, grid, constants));
    append_report(csv,
                  check_inv_poly_lipschitz(problem, box, config.pairs, constants, config.seed));
    for (const CheckReport& report :
         check_lj_kernel(config.problem.lj, radii, config.pairs, config.seed))
      append_report(csv, report);
  } else {
    throw std::invalid_argument("check supports the power_law and lj_pair problems");
  }
  return csv.str();
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  return config_to_json_object(config).dump(2);
}

ExperimentConfig config_from_json(const std::string& json_text) {
  return config_from_json_object(json::parse(json_text));
}

int run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const SingularProblem problem = build_problem(config.problem);

  // Validate the taming constraint up front so misconfiguration is a clean
  // exit-1 rather than a mid-run failure.
  if (config.taming && problem.has_singularity() && problem.constants().l > 0.0) {
    const double w = config.resolved_w(problem);
    if (w > 1.0 / (3.0 * problem.constants().l) + 1.0e-12)
      throw std::invalid_argument("w exceeds 1/(3l) for the declared l");
  }

  std::string csv;
  switch (config.command) {
    case Command::convergence: csv = run_convergence(config, problem); break;
    case Command::moments: csv = run_moments(config, problem); break;
    case Command::stopping: csv = run_stopping(config, problem); break;
    case Command::diverge: csv = run_diverge(config, problem); break;
    case Command::check: csv = run_check(config, problem); break;
  }
  write_file(config.out, csv);

  const double wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = config_to_json_object(config);
  manifest["version"] = kVersionString;
  manifest["wall_time_seconds"] = wall_seconds;
  write_file(config.out + ".manifest.json", manifest.dump(2) + "\n");
  return 0;
}

}  // namespace tamedsde
