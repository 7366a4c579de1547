// Command-line front end: parses flags (and an optional JSON config file,
// flags winning) into an ExperimentConfig and runs it. Exit codes: 0 success,
// 1 validation error, 2 runtime anomaly.

#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tamedsde/experiments.hpp"

namespace {

// "64..4096" doubles from 64 to 4096; otherwise a comma list "64,128,256".
std::vector<std::int64_t> parse_levels(const std::string& text) {
  std::vector<std::int64_t> levels;
  const auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    const std::int64_t lo = std::stoll(text.substr(0, range_pos));
    const std::int64_t hi = std::stoll(text.substr(range_pos + 2));
    if (lo < 1 || hi < lo) throw CLI::ValidationError("--levels", "invalid range");
    for (std::int64_t n = lo; n <= hi; n *= 2) levels.push_back(n);
    return levels;
  }
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) levels.push_back(std::stoll(item));
  if (levels.empty()) throw CLI::ValidationError("--levels", "no levels given");
  return levels;
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) values.push_back(std::stod(item));
  return values;
}

struct RawArgs {
  std::optional<std::string> config_file;
  std::optional<std::string> problem;
  std::optional<double> alpha, a1, a2, lj_p, lj_q, lambda, ou_lambda;
  std::optional<int> dimension;
  std::optional<std::string> x0;
  std::optional<double> horizon, delta, w, p_order;
  std::optional<bool> taming;
  std::optional<std::string> levels;
  std::optional<std::int64_t> samples, n_ref_multiplier, pairs, grid_points;
  std::optional<double> rho_min;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

void add_common_flags(CLI::App* cmd, RawArgs& raw, bool p_is_order) {
  cmd->add_option("--config", raw.config_file, "JSON config file; flags override its values");
  cmd->add_option("--problem", raw.problem, "power_law | lj_pair | brownian | ou");
  cmd->add_option("--alpha", raw.alpha, "power_law drift exponent");
  cmd->add_option("--a1", raw.a1, "lj_pair repulsive amplitude");
  cmd->add_option("--a2", raw.a2, "lj_pair attractive amplitude");
  if (p_is_order) {
    cmd->add_option("--p", raw.p_order, "moment order of the error functional");
    cmd->add_option("--lj-p", raw.lj_p, "lj_pair repulsive exponent");
    cmd->add_option("--lj-q", raw.lj_q, "lj_pair attractive exponent");
  } else {
    cmd->add_option("--p", raw.lj_p, "lj_pair repulsive exponent");
    cmd->add_option("--q", raw.lj_q, "lj_pair attractive exponent");
    cmd->add_option("--lj-p", raw.lj_p, "alias of --p");
    cmd->add_option("--lj-q", raw.lj_q, "alias of --q");
  }
  cmd->add_option("--lambda", raw.lambda, "lj_pair confining strength");
  cmd->add_option("--ou-lambda", raw.ou_lambda, "ou mean-reversion rate");
  cmd->add_option("--dim", raw.dimension, "dimension of brownian/ou problems");
  cmd->add_option("--x0", raw.x0, "initial point, comma separated");
  cmd->add_option("--T", raw.horizon, "time horizon");
  cmd->add_option("--delta", raw.delta, "taming threshold scale");
  cmd->add_option("--w", raw.w, "taming exponent (default 1/(3l))");
  cmd->add_option("--taming", raw.taming, "true = tamed scheme, false = plain Euler");
  cmd->add_option("--levels", raw.levels, "step counts: '64..4096' (doubling) or '64,128'");
  cmd->add_option("--samples", raw.samples, "Monte Carlo paths");
  cmd->add_option("--seed", raw.seed, "master seed");
  cmd->add_option("--n-ref-multiplier", raw.n_ref_multiplier,
                  "reference resolution as a multiple of max(levels)");
  cmd->add_option("--pairs", raw.pairs, "checker sample pairs");
  cmd->add_option("--grid-points", raw.grid_points, "checker grid resolution");
  cmd->add_option("--rho-min", raw.rho_min, "checker smallest sampled distance");
  cmd->add_option("--out", raw.out, "output CSV path");
  cmd->add_option("--threads", raw.threads, "worker threads (0 = machine parallelism)");
}

tamedsde::ExperimentConfig resolve(tamedsde::Command command, const RawArgs& raw) {
  tamedsde::ExperimentConfig config;
  if (raw.config_file) {
    std::ifstream in(*raw.config_file);
    if (!in) throw std::invalid_argument("cannot read config file: " + *raw.config_file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    config = tamedsde::config_from_json(buffer.str());
  }
  config.command = command;
  if (raw.problem) config.problem.kind = *raw.problem;
  if (raw.alpha) config.problem.alpha = *raw.alpha;
  if (raw.a1) config.problem.lj.a1 = *raw.a1;
  if (raw.a2) config.problem.lj.a2 = *raw.a2;
  if (raw.lj_p) config.problem.lj.p_exp = *raw.lj_p;
  if (raw.lj_q) config.problem.lj.q_exp = *raw.lj_q;
  if (raw.lambda) config.problem.lj.lambda = *raw.lambda;
  if (raw.ou_lambda) config.problem.ou_lambda = *raw.ou_lambda;
  if (raw.dimension) config.problem.dimension = *raw.dimension;
  if (raw.x0) config.problem.x0 = parse_vector(*raw.x0);
  if (raw.horizon) config.horizon = *raw.horizon;
  if (raw.delta) config.delta = *raw.delta;
  if (raw.w) config.w_exp = *raw.w;
  if (raw.taming) config.taming = *raw.taming;
  if (raw.levels) config.levels = parse_levels(*raw.levels);
  if (raw.p_order) config.p_order = *raw.p_order;
  if (raw.samples) config.samples = *raw.samples;
  if (raw.seed) config.seed = *raw.seed;
  if (raw.n_ref_multiplier) config.n_ref_multiplier = *raw.n_ref_multiplier;
  if (raw.pairs) config.pairs = *raw.pairs;
  if (raw.grid_points) config.grid_points = *raw.grid_points;
  if (raw.rho_min) config.rho_min = *raw.rho_min;
  if (raw.out) config.out = *raw.out;
  if (raw.threads) config.threads = *raw.threads;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tamed Euler simulation lab for SDEs with singular drift"};
  app.require_subcommand(1);

  RawArgs raw;
  CLI::App* convergence =
      app.add_subcommand("convergence", "strong error vs step count, with rate fit");
  CLI::App* moments = app.add_subcommand("moments", "inverse-distance moments per level");
  CLI::App* stopping = app.add_subcommand("stopping", "threshold hit probability per level");
  CLI::App* diverge = app.add_subcommand("diverge", "plain Euler blow-up statistics");
  CLI::App* check = app.add_subcommand("check", "audit the structural assumptions");
  add_common_flags(convergence, raw, true);
  add_common_flags(moments, raw, true);
  add_common_flags(stopping, raw, true);
  add_common_flags(diverge, raw, true);
  add_common_flags(check, raw, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  tamedsde::Command command = tamedsde::Command::convergence;
  if (moments->parsed()) command = tamedsde::Command::moments;
  if (stopping->parsed()) command = tamedsde::Command::stopping;
  if (diverge->parsed()) command = tamedsde::Command::diverge;
  if (check->parsed()) command = tamedsde::Command::check;

  try {
    const tamedsde::ExperimentConfig config = resolve(command, raw);
    return tamedsde::run_experiment(config);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 2;
  }
}
