#pragma once

// Benchmark protocol: two deterministic planners fed by point forecasts,
// compared with the tri-level planner on held-out weather samples, plus
// parameter sweeps over noise, region count and the two budgets.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "resilience/conformal.hpp"
#include "resilience/model.hpp"
#include "resilience/simulator.hpp"
#include "resilience/solver.hpp"

namespace resilience::bench {

enum class ForecastMethod {
  empirical_average,
  empirical_conservative,
  conformal_average,
  conformal_conservative,
};

inline constexpr ForecastMethod kForecastMethods[] = {
    ForecastMethod::empirical_average, ForecastMethod::empirical_conservative,
    ForecastMethod::conformal_average, ForecastMethod::conformal_conservative};

std::string to_string(ForecastMethod m);

struct Forecast {
  std::vector<double> u_hat;
  ForecastMethod method = ForecastMethod::empirical_average;
};

/// Per-region sample mean and standard deviation (denominator size - 1).
struct HistoryStats {
  std::vector<double> eta;
  std::vector<double> sigma;
};

/// Throws CalibrationError with fewer than two records.
HistoryStats history_stats(const ObservationSet& history);

/// Empirical methods read `history`; conformal_average averages the model's
/// predictions over `history` (pass the training part); conformal_conservative
/// returns omega's local upper bounds. `model` and `omega` may be null for the
/// empirical methods.
Forecast make_forecast(ForecastMethod method, const ObservationSet& history,
                       const Regressor* model, const UncertaintySet* omega);

/// Knapsack over the largest h_i u_hat_i. Regions with zero weight stay
/// unprotected.
std::vector<double> plan_proactive_only(const Instance& inst, const Forecast& forecast);

/// Joint proactive and reactive plan against the point forecast.
std::pair<std::vector<double>, std::vector<double>> plan_cooptimized(const Instance& inst,
                                                                     const Forecast& forecast);

/// Objective value of a co-optimized plan against its own forecast.
double cooptimized_value(const Instance& inst, const Forecast& forecast,
                         const std::vector<double>& x, const std::vector<double>& y);

/// sum_i h_i u_bar_i (1 - x_i)(1 - y_i)
double evaluate_recourse(const Instance& inst, std::span<const double> x_bar,
                         std::span<const double> y_bar, std::span<const double> u_bar);

/// How the tri-level planner's recourse is fixed for the realized-outage
/// criterion: re-optimized for each outage vector, or taken once from the
/// worst case of its own outage set.
enum class RecourseMode { reoptimize, fixed };

std::string to_string(RecourseMode m);
RecourseMode recourse_mode_from_string(const std::string& s);

struct BenchConfig {
  int n = 10;
  std::uint64_t seed = 1;
  double chi = 0.1;
  int n_samples = 200;
  int n_history = 160;          // the rest is held out for evaluation
  double train_fraction = 0.5;  // of the history
  double alpha = 0.1;
  double proactive_budget = 1000.0;
  double reactive_budget = 1.0;
  double h_scale = 1.0;
  RecourseMode recourse_mode = RecourseMode::reoptimize;
  BendersOptions benders;

  void validate() const;
  [[nodiscard]] SirConfig sir_config() const;
};

struct BenchRow {
  std::string planner;
  std::string forecast;
  std::string variant;
  int sample_id = 0;
  double value = 0.0;
};

struct SummaryRow {
  std::string planner;
  std::string forecast;
  std::string variant;
  double mean = 0.0;
  int count = 0;
};

/// Tri-level solver statistics for one evaluation sample.
struct SolveStats {
  int sample_id = 0;
  int iterations = 0;
  double value = 0.0;
  double gap = 0.0;
  bool converged = true;
  double wall_seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<SolveStats> solves;
  std::vector<std::string> warnings;

  /// Means per (planner, forecast, variant), in first-appearance order.
  [[nodiscard]] std::vector<SummaryRow> summary() const;
  [[nodiscard]] std::vector<double> values(const std::string& planner, const std::string& forecast,
                                           const std::string& variant) const;
};

/// Planner labels in reports.
inline const std::string kProactiveOnly = "proactive_only";
inline const std::string kCoOptimized = "co_optimized";
inline const std::string kTriLevel = "tri_level";
inline const std::string kAllForecasts = "all";     // proactive-only rows when actions coincide
inline const std::string kConformalSet = "conformal_set";

/// Worst-case rows use the set variants local_only, global_only and full;
/// realized-outage rows use eta, eta+sigma and eta+2sigma and cover the
/// co-optimized and tri-level planners.
BenchReport run_benchmark(const BenchConfig& config);

enum class SweepParameter { chi, n, proactive_budget, reactive_budget };

std::string to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(const std::string& s);

/// Applies one grid value to a copy of the config. n is rounded to an integer.
BenchConfig with_parameter(BenchConfig config, SweepParameter p, double value);

struct SweepPoint {
  double value = 0.0;
  BenchReport report;
};

struct SweepReport {
  SweepParameter parameter = SweepParameter::chi;
  std::vector<SweepPoint> points;
};

SweepReport sensitivity_sweep(SweepParameter parameter, const std::vector<double>& grid,
                              const BenchConfig& config);

/// `planner,forecast,variant,sample_id,value`
std::string report_csv(const BenchReport& report);
/// `planner,forecast,variant,mean,count`
std::string summary_csv(const BenchReport& report);
/// `sample_id,iterations,value,gap,converged`
std::string solves_csv(const BenchReport& report);
/// `sample_id,wall_seconds`
std::string timing_csv(const BenchReport& report);
/// Worst-case values side by side, one line per planner and forecast.
std::string summary_table(const BenchReport& report);

/// `parameter,value,planner,forecast,variant,sample_id,difference` where the
/// difference is the benchmark planner's worst-case value minus the tri-level
/// value on the same sample and set variant.
std::string sweep_differences_csv(const SweepReport& sweep);
/// `parameter,value,tri_level_mean,max_gap,mean_iterations,unconverged`
std::string sweep_points_csv(const SweepReport& sweep);
/// `parameter,value,wall_seconds_total,wall_seconds_max`
std::string sweep_timing_csv(const SweepReport& sweep);

}  // namespace resilience::bench
