#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tamedsde/problems.hpp"

namespace tamedsde {

inline constexpr const char* kVersionString = "tamedsde 0.1.0";

enum class Command { convergence, moments, stopping, diverge, check };

Command command_from_string(const std::string& name);
std::string to_string(Command command);

struct ProblemSpec {
  std::string kind = "power_law";  // power_law | lj_pair | brownian | ou
  double alpha = 3.0;              // power_law
  LennardJonesPairParams lj{};     // lj_pair
  double ou_lambda = 1.0;          // ou
  int dimension = 1;               // brownian / ou
  std::vector<double> x0;          // empty = problem default
};

SingularProblem build_problem(const ProblemSpec& spec);

// Fully resolved run description; the manifest serializes exactly this.
struct ExperimentConfig {
  Command command = Command::convergence;
  ProblemSpec problem;

  // scheme
  double horizon = 1.0;
  double delta = 1.0;
  std::optional<double> w_exp;  // default: 1/(3l) for singular problems, else 0
  bool taming = true;

  // estimator
  std::vector<std::int64_t> levels = {64, 128, 256, 512, 1024, 2048, 4096};
  double p_order = 2.0;
  std::optional<std::int64_t> samples;  // default: 1000 rate runs, 10^4 probability runs
  std::uint64_t seed = 0;
  std::int64_t n_ref_multiplier = 16;

  // checker
  std::int64_t pairs = 100000;
  std::int64_t grid_points = 256;
  double rho_min = 1.0e-4;

  std::string out = "tamedsde_out.csv";
  int threads = 0;

  double resolved_w(const SingularProblem& problem) const;
  std::int64_t resolved_samples() const;
};

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& json_text);

// Runs the experiment, writing the CSV to config.out and the manifest (the
// resolved config plus version and wall time) to config.out + ".manifest.json".
// Returns 0. Throws std::invalid_argument on bad configuration and
// std::runtime_error on runtime anomalies; the CLI maps these to exit codes
// 1 and 2.
int run_experiment(const ExperimentConfig& config);

// Floats are serialized with 17 significant digits so they re-parse exactly.
std::string format_double(double value);

}  // namespace tamedsde
