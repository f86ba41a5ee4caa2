#pragma once

// Settings shared by every subcommand: read from a JSON file, then
// overridden by command-line flags.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "resilience/bench.hpp"
#include "resilience/simulator.hpp"
#include "resilience/solver.hpp"

namespace resilience::cli {

/// A flag or config value is out of range. Reported as a usage error.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  int n = 10;
  std::uint64_t seed = 1;
  double chi = 0.1;
  int n_samples = 200;
  int n_history = 160;
  double train_fraction = 0.5;
  double alpha = 0.1;
  double proactive_budget = 1000.0;
  double reactive_budget = 1.0;
  double h_scale = 1.0;
  double epsilon = 1e-6;
  double relative_epsilon = 0.0;
  int max_iter = 200;
  CutMode cut_mode = CutMode::both;
  bench::RecourseMode recourse_mode = bench::RecourseMode::reoptimize;
  nlohmann::json simulator = nlohmann::json::object();  // extra SirConfig fields

  std::filesystem::path instance_file;
  std::filesystem::path data_file;
  std::filesystem::path set_file;
  std::filesystem::path plan_file;
  std::filesystem::path out_dir = "out";

  std::string sweep_parameter = "B";
  std::vector<double> sweep_grid{500.0, 1000.0, 2000.0};

  /// Throws UsageError.
  void validate() const;

  [[nodiscard]] SirConfig sir_config() const;
  [[nodiscard]] BendersOptions benders_options() const;
  [[nodiscard]] bench::BenchConfig bench_config() const;
};

/// Unknown keys are rejected so that typos do not pass silently.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

std::vector<double> parse_grid(const std::string& text);

}  // namespace resilience::cli
