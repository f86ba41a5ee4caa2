#pragma once

// Split-conformal outage intervals: a per-region regressor is fit on one half
// of the history, residual order statistics on the other half set the widths
// of the local and global intervals.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "resilience/model.hpp"
#include "resilience/observations.hpp"

namespace resilience {

/// Partition into (train, calibration). The train part has
/// round(train_fraction * size) records; both keep the input order.
std::pair<ObservationSet, ObservationSet> split_observations(const ObservationSet& data,
                                                             double train_fraction,
                                                             std::uint64_t seed);

/// Per-region linear predictor u_i ~ coef_i[0] + sum_j coef_i[1 + j] w(i, j),
/// in the original feature units.
struct Regressor {
  int n = 0;
  int p = 0;
  std::vector<std::vector<double>> coef;

  friend bool operator==(const Regressor&, const Regressor&) = default;
};

/// Ridge least squares on standardized features, one fit per region. The
/// intercept is not penalized.
Regressor fit_regressor(const ObservationSet& train, double ridge = 1e-6);

/// Predicted outages, clipped below at zero.
std::vector<double> predict(const Regressor& model, const Matrix& w);

struct CalibrationScores {
  std::vector<std::vector<double>> local;  // n lists
  std::vector<double> global;

  friend bool operator==(const CalibrationScores&, const CalibrationScores&) = default;
};

CalibrationScores nonconformity_scores(const Regressor& model, const ObservationSet& cal);

/// The ceil((m + 1)(1 - alpha))-th smallest score, or +infinity when that
/// rank exceeds m.
double conformal_quantile(const std::vector<double>& scores, double alpha);

/// Local intervals f_i(w) -/+ Q_i and the global interval sum_i f_i(w) -/+ Q_0,
/// with lower ends clipped at zero. Throws CoverageInfeasibleError when a
/// quantile is infinite unless `allow_unbounded` is set. Notes about
/// adjustments go to `warnings` when given.
UncertaintySet build_uncertainty_set(const Regressor& model, const CalibrationScores& scores,
                                     double alpha, const Matrix& w, bool allow_unbounded = false,
                                     std::vector<std::string>* warnings = nullptr);

struct CoverageReport {
  std::vector<double> local_rates;
  double global_rate = 0.0;
  double joint_rate = 0.0;
};

CoverageReport empirical_coverage(const Regressor& model, const CalibrationScores& scores,
                                  double alpha, const ObservationSet& test);

}  // namespace resilience
