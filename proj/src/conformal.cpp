#include "resilience/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "resilience/random.hpp"

namespace resilience {

namespace {

constexpr std::uint64_t kSplitStream = 0x5eed5eed5eed5eedULL;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw CalibrationError("alpha must lie in (0, 1)");
}

// Solves the symmetric positive definite system a x = b in place.
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b, int k) {
  for (int j = 0; j < k; ++j) {
    double d = a[j * k + j];
    for (int q = 0; q < j; ++q) d -= a[j * k + q] * a[j * k + q];
    if (!(d > 0.0)) throw CalibrationError("fit_regressor: normal equations are not positive definite");
    d = std::sqrt(d);
    a[j * k + j] = d;
    for (int i = j + 1; i < k; ++i) {
      double s = a[i * k + j];
      for (int q = 0; q < j; ++q) s -= a[i * k + q] * a[j * k + q];
      a[i * k + j] = s / d;
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int q = 0; q < i; ++q) b[i] -= a[i * k + q] * b[q];
    b[i] /= a[i * k + i];
  }
  for (int i = k - 1; i >= 0; --i) {
    for (int q = i + 1; q < k; ++q) b[i] -= a[q * k + i] * b[q];
    b[i] /= a[i * k + i];
  }
  return b;
}

double raw_prediction(const std::vector<double>& coef, std::span<const double> row) {
  double v = coef[0];
  for (std::size_t j = 0; j < row.size(); ++j) v += coef[j + 1] * row[j];
  return v;
}

}  // namespace

std::pair<ObservationSet, ObservationSet> split_observations(const ObservationSet& data,
                                                             double train_fraction,
                                                             std::uint64_t seed) {
  if (data.size() < 4) throw CalibrationError("split_observations: need at least 4 observations");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw CalibrationError("split_observations: train_fraction must lie in (0, 1)");
  }
  const auto m = static_cast<long>(data.size());
  const long n_train = std::lround(train_fraction * static_cast<double>(m));
  if (n_train < 1 || n_train > m - 1) {
    throw CalibrationError("split_observations: both parts must be nonempty");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, kSplitStream);
  rng.shuffle(order);
  std::vector<char> in_train(data.size(), 0);
  for (long k = 0; k < n_train; ++k) in_train[order[k]] = 1;

  ObservationSet train{data.n, data.p, {}};
  ObservationSet cal{data.n, data.p, {}};
  for (std::size_t k = 0; k < data.size(); ++k) {
    (in_train[k] ? train : cal).records.push_back(data.records[k]);
  }
  return {std::move(train), std::move(cal)};
}

Regressor fit_regressor(const ObservationSet& train, double ridge) {
  train.validate();
  const int n = train.n;
  const int p = train.p;
  const auto m = static_cast<int>(train.size());
  if (m < p + 2) {
    throw CalibrationError("fit_regressor: need at least p + 2 = " + std::to_string(p + 2) +
                           " training observations, got " + std::to_string(m));
  }
  if (!(ridge >= 0.0)) throw CalibrationError("fit_regressor: ridge weight must be nonnegative");

  Regressor model;
  model.n = n;
  model.p = p;
  model.coef.assign(n, std::vector<double>(p + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    std::vector<double> mean(p, 0.0), sd(p, 0.0);
    double y_mean = 0.0;
    for (const auto& r : train.records) {
      for (int j = 0; j < p; ++j) mean[j] += r.w(i, j);
      y_mean += r.u[i];
    }
    for (int j = 0; j < p; ++j) mean[j] /= m;
    y_mean /= m;
    for (const auto& r : train.records) {
      for (int j = 0; j < p; ++j) sd[j] += (r.w(i, j) - mean[j]) * (r.w(i, j) - mean[j]);
    }
    for (int j = 0; j < p; ++j) {
      sd[j] = std::sqrt(sd[j] / m);
      if (!(sd[j] > 1e-12 * (1.0 + std::abs(mean[j])))) sd[j] = 0.0;  // constant column
    }

    std::vector<double> gram(static_cast<std::size_t>(p) * p, 0.0), rhs(p, 0.0);
    std::vector<double> z(p);
    for (const auto& r : train.records) {
      for (int j = 0; j < p; ++j) z[j] = sd[j] > 0.0 ? (r.w(i, j) - mean[j]) / sd[j] : 0.0;
      const double y = r.u[i] - y_mean;
      for (int a = 0; a < p; ++a) {
        rhs[a] += z[a] * y;
        for (int b = 0; b < p; ++b) gram[a * p + b] += z[a] * z[b];
      }
    }
    for (int j = 0; j < p; ++j) gram[j * p + j] += sd[j] > 0.0 ? ridge : 1.0;
    const auto beta = cholesky_solve(gram, rhs, p);

    auto& c = model.coef[i];
    c[0] = y_mean;
    for (int j = 0; j < p; ++j) {
      if (sd[j] == 0.0) continue;
      c[j + 1] = beta[j] / sd[j];
      c[0] -= c[j + 1] * mean[j];
    }
  }
  return model;
}

std::vector<double> predict(const Regressor& model, const Matrix& w) {
  if (w.rows != model.n || w.cols != model.p) {
    throw DimensionError("predict: feature matrix must be " + std::to_string(model.n) + "x" +
                         std::to_string(model.p));
  }
  std::vector<double> out(model.n);
  for (int i = 0; i < model.n; ++i) out[i] = std::max(0.0, raw_prediction(model.coef[i], w.row(i)));
  return out;
}

CalibrationScores nonconformity_scores(const Regressor& model, const ObservationSet& cal) {
  if (cal.empty()) throw CalibrationError("nonconformity_scores: calibration set is empty");
  if (cal.n != model.n || cal.p != model.p) throw DimensionError("nonconformity_scores: shape mismatch");
  CalibrationScores s;
  s.local.assign(model.n, {});
  for (auto& l : s.local) l.reserve(cal.size());
  s.global.reserve(cal.size());
  for (const auto& r : cal.records) {
    const auto kappa = predict(model, r.w);
    double total = 0.0;
    for (int i = 0; i < model.n; ++i) {
      const double resid = r.u[i] - kappa[i];
      s.local[i].push_back(std::abs(resid));
      total += resid;
    }
    s.global.push_back(std::abs(total));
  }
  return s;
}

double conformal_quantile(const std::vector<double>& scores, double alpha) {
  if (scores.empty()) throw CalibrationError("conformal_quantile: no scores");
  check_alpha(alpha);
  const auto m = static_cast<double>(scores.size());
  // The small offset keeps exact products such as 11 * 0.9 from rounding up.
  const auto rank = static_cast<std::size_t>(std::ceil((m + 1.0) * (1.0 - alpha) - 1e-9));
  if (rank > scores.size()) return std::numeric_limits<double>::infinity();
  std::vector<double> sorted(scores);
  const std::size_t k = rank == 0 ? 0 : rank - 1;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(k), sorted.end());
  return sorted[k];
}

UncertaintySet build_uncertainty_set(const Regressor& model, const CalibrationScores& scores,
                                     double alpha, const Matrix& w, bool allow_unbounded,
                                     std::vector<std::string>* warnings) {
  check_alpha(alpha);
  if (static_cast<int>(scores.local.size()) != model.n) {
    throw DimensionError("build_uncertainty_set: scores do not match the model");
  }
  const auto f = predict(model, w);
  auto quantile = [&](const std::vector<double>& s, const std::string& what) {
    const double q = conformal_quantile(s, alpha);
    if (std::isinf(q) && !allow_unbounded) {
      throw CoverageInfeasibleError("coverage 1 - alpha is unattainable for " + what +
                                    ": alpha = " + std::to_string(alpha) +
                                    " needs more than m = " + std::to_string(s.size()) +
                                    " calibration scores");
    }
    return q;
  };

  UncertaintySet set;
  set.alpha = alpha;
  set.local_lower.resize(model.n);
  set.local_upper.resize(model.n);
  double f0 = 0.0, lo_sum = 0.0, up_sum = 0.0;
  for (int i = 0; i < model.n; ++i) {
    const double q = quantile(scores.local[i], "region " + std::to_string(i));
    set.local_lower[i] = std::max(0.0, f[i] - q);
    set.local_upper[i] = f[i] + q;
    f0 += f[i];
    lo_sum += set.local_lower[i];
    up_sum += set.local_upper[i];
  }
  const double q0 = quantile(scores.global, "the global interval");
  set.global_lower = std::max(0.0, f0 - q0);
  set.global_upper = f0 + q0;
  if (set.global_upper < lo_sum) {
    if (warnings) warnings->push_back("global upper bound raised to the sum of local lower bounds");
    set.global_upper = lo_sum;
  }
  if (set.global_lower > up_sum) {
    if (warnings) warnings->push_back("global lower bound lowered to the sum of local upper bounds");
    set.global_lower = up_sum;
  }
  return set;
}

CoverageReport empirical_coverage(const Regressor& model, const CalibrationScores& scores,
                                  double alpha, const ObservationSet& test) {
  if (test.empty()) throw CalibrationError("empirical_coverage: test set is empty");
  CoverageReport rep;
  rep.local_rates.assign(model.n, 0.0);
  for (const auto& r : test.records) {
    const auto set = build_uncertainty_set(model, scores, alpha, r.w, true);
    bool all = true;
    double total = 0.0;
    for (int i = 0; i < model.n; ++i) {
      const bool in = r.u[i] >= set.local_lower[i] && r.u[i] <= set.local_upper[i];
      rep.local_rates[i] += in ? 1.0 : 0.0;
      all = all && in;
      total += r.u[i];
    }
    const bool in_global = total >= set.global_lower && total <= set.global_upper;
    rep.global_rate += in_global ? 1.0 : 0.0;
    rep.joint_rate += (all && in_global) ? 1.0 : 0.0;
  }
  const auto m = static_cast<double>(test.size());
  for (auto& v : rep.local_rates) v /= m;
  rep.global_rate /= m;
  rep.joint_rate /= m;
  return rep;
}

}  // namespace resilience
