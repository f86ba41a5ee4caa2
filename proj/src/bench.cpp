#include "resilience/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <tuple>

#include "resilience/io.hpp"
#include "resilience/lp.hpp"

namespace resilience::bench {

namespace {

const char* const kSetVariants[] = {"local_only", "global_only", "full"};
const SetVariant kSetVariantValues[] = {SetVariant::local_only, SetVariant::global_only,
                                        SetVariant::full};
const char* const kOutageVariants[] = {"eta", "eta+sigma", "eta+2sigma"};

std::vector<double> weights(const Instance& inst, const Forecast& f) {
  if (static_cast<int>(f.u_hat.size()) != inst.n()) {
    throw DimensionError("forecast length " + std::to_string(f.u_hat.size()) +
                         " does not match n = " + std::to_string(inst.n()));
  }
  std::vector<double> v(inst.n());
  for (int i = 0; i < inst.n(); ++i) {
    if (!std::isfinite(f.u_hat[i]) || f.u_hat[i] < 0.0) {
      throw DataError("forecast entries must be finite and nonnegative");
    }
    v[i] = inst.h()[i] * f.u_hat[i];
  }
  return v;
}

std::vector<double> rounded(const std::vector<double>& x, std::size_t begin, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = x[begin + i] > 0.5 ? 1.0 : 0.0;
  return out;
}

ObservationSet slice(const ObservationSet& data, std::size_t begin, std::size_t end) {
  return ObservationSet{data.n, data.p, {data.records.begin() + begin, data.records.begin() + end}};
}

void append(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out += ',';
    out += fields[k];
  }
  out += '\n';
}

struct SamplePlans {
  int sample_id = 0;
  UncertaintySet omega;
  std::vector<std::vector<double>> proactive;  // one per forecast method
  std::vector<std::pair<std::vector<double>, std::vector<double>>> coopt;
  std::vector<double> trilevel_x;
  std::vector<double> trilevel_fixed_y;
};

}  // namespace

std::string to_string(ForecastMethod m) {
  switch (m) {
    case ForecastMethod::empirical_average: return "empirical_average";
    case ForecastMethod::empirical_conservative: return "empirical_conservative";
    case ForecastMethod::conformal_average: return "conformal_average";
    case ForecastMethod::conformal_conservative: return "conformal_conservative";
  }
  return "empirical_average";
}

std::string to_string(RecourseMode m) { return m == RecourseMode::fixed ? "fixed" : "reoptimize"; }

RecourseMode recourse_mode_from_string(const std::string& s) {
  if (s == "reoptimize") return RecourseMode::reoptimize;
  if (s == "fixed") return RecourseMode::fixed;
  throw DataError("unknown recourse mode '" + s + "' (expected reoptimize or fixed)");
}

HistoryStats history_stats(const ObservationSet& history) {
  const std::size_t m = history.size();
  if (m < 2) throw CalibrationError("history needs at least 2 records for a standard deviation");
  HistoryStats s{std::vector<double>(history.n, 0.0), std::vector<double>(history.n, 0.0)};
  for (const auto& r : history.records)
    for (int i = 0; i < history.n; ++i) s.eta[i] += r.u[i];
  for (double& e : s.eta) e /= static_cast<double>(m);
  for (const auto& r : history.records)
    for (int i = 0; i < history.n; ++i) s.sigma[i] += (r.u[i] - s.eta[i]) * (r.u[i] - s.eta[i]);
  for (double& v : s.sigma) v = std::sqrt(v / static_cast<double>(m - 1));
  return s;
}

Forecast make_forecast(ForecastMethod method, const ObservationSet& history, const Regressor* model,
                       const UncertaintySet* omega) {
  Forecast f;
  f.method = method;
  switch (method) {
    case ForecastMethod::empirical_average: {
      if (history.empty()) throw CalibrationError("empirical forecast needs a nonempty history");
      f.u_hat.assign(history.n, 0.0);
      for (const auto& r : history.records)
        for (int i = 0; i < history.n; ++i) f.u_hat[i] += r.u[i];
      for (double& v : f.u_hat) v /= static_cast<double>(history.size());
      break;
    }
    case ForecastMethod::empirical_conservative: {
      const auto s = history_stats(history);
      f.u_hat.resize(history.n);
      for (int i = 0; i < history.n; ++i) f.u_hat[i] = s.eta[i] + 1.96 * s.sigma[i];
      break;
    }
    case ForecastMethod::conformal_average: {
      if (model == nullptr) throw DataError("conformal_average needs a fitted model");
      if (history.empty()) throw CalibrationError("conformal_average needs training records");
      f.u_hat.assign(model->n, 0.0);
      for (const auto& r : history.records) {
        const auto p = predict(*model, r.w);
        for (int i = 0; i < model->n; ++i) f.u_hat[i] += p[i];
      }
      for (double& v : f.u_hat) v /= static_cast<double>(history.size());
      break;
    }
    case ForecastMethod::conformal_conservative: {
      if (omega == nullptr) throw DataError("conformal_conservative needs an outage set");
      f.u_hat = omega->local_upper;
      for (double v : f.u_hat) {
        if (!std::isfinite(v)) throw CoverageInfeasibleError("conformal_conservative: unbounded local interval");
      }
      break;
    }
  }
  return f;
}

std::vector<double> plan_proactive_only(const Instance& inst, const Forecast& forecast) {
  const auto v = weights(inst, forecast);
  const int n = inst.n();
  lp::LinearProgram prog(lp::Sense::maximize);
  for (int i = 0; i < n; ++i) prog.add_variable(v[i], 0.0, 1.0, true);
  prog.add_row(inst.b(), lp::Relation::less_equal, inst.proactive_budget(), "budget");
  const auto sol = lp::solve_milp(prog);
  if (sol.status != lp::LpStatus::optimal) throw InfeasibleError("proactive-only knapsack failed");
  auto x = rounded(sol.x, 0, n);
  for (int i = 0; i < n; ++i)
    if (v[i] == 0.0) x[i] = 0.0;
  return x;
}

std::pair<std::vector<double>, std::vector<double>> plan_cooptimized(const Instance& inst,
                                                                     const Forecast& forecast) {
  const auto v = weights(inst, forecast);
  const int n = inst.n();
  lp::LinearProgram prog(lp::Sense::minimize);
  for (int i = 0; i < n; ++i) prog.add_variable(0.0, 0.0, 1.0, true);   // x
  for (int i = 0; i < n; ++i) prog.add_variable(0.0, 0.0, 1.0, true);   // y
  for (int i = 0; i < n; ++i) prog.add_variable(v[i], 0.0, 1.0, false); // z
  std::vector<double> row(3 * n, 0.0);
  std::copy(inst.b().begin(), inst.b().end(), row.begin());
  prog.add_row(row, lp::Relation::less_equal, inst.proactive_budget(), "proactive_budget");
  std::fill(row.begin(), row.end(), 0.0);
  std::copy(inst.c().begin(), inst.c().end(), row.begin() + n);
  prog.add_row(row, lp::Relation::less_equal, inst.reactive_budget(), "reactive_budget");
  for (int i = 0; i < n; ++i) {
    std::vector<double> r(3 * n, 0.0);
    r[2 * n + i] = 1.0;
    r[i] = 1.0;
    prog.add_row(r, lp::Relation::less_equal, 1.0);  // z <= 1 - x
    r[i] = 0.0;
    r[n + i] = 1.0;
    prog.add_row(r, lp::Relation::less_equal, 1.0);  // z <= 1 - y
    r[i] = 1.0;
    prog.add_row(r, lp::Relation::greater_equal, 1.0);  // z >= 1 - x - y
  }
  const auto sol = lp::solve_milp(prog);
  if (sol.status != lp::LpStatus::optimal) throw InfeasibleError("co-optimized planning MILP failed");
  auto x = rounded(sol.x, 0, n);
  auto y = rounded(sol.x, n, n);
  for (int i = 0; i < n; ++i) {
    if (v[i] == 0.0) x[i] = y[i] = 0.0;
  }
  return {x, y};
}

double cooptimized_value(const Instance& inst, const Forecast& forecast,
                         const std::vector<double>& x, const std::vector<double>& y) {
  return outage_cost(inst, x, forecast.u_hat, y);
}

double evaluate_recourse(const Instance& inst, std::span<const double> x_bar,
                         std::span<const double> y_bar, std::span<const double> u_bar) {
  return outage_cost(inst, x_bar, u_bar, y_bar);
}

void BenchConfig::validate() const {
  if (n < 1) throw DataError("bench: n must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("bench: alpha must lie in (0,1)");
  if (n_history < 4 || n_samples <= n_history) {
    throw DataError("bench: need n_history >= 4 and at least one held-out sample");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw DataError("bench: train_fraction must lie in (0,1)");
  if (!(chi >= 0.0)) throw DataError("bench: chi must be nonnegative");
  if (!(proactive_budget >= 0.0) || !(reactive_budget >= 0.0)) throw DataError("bench: budgets must be nonnegative");
  if (!(h_scale > 0.0)) throw DataError("bench: h_scale must be positive");
  if (!(benders.epsilon >= 0.0)) throw DataError("bench: epsilon must be nonnegative");
  if (benders.max_iter < 1) throw DataError("bench: max_iter must be at least 1");
}

SirConfig BenchConfig::sir_config() const {
  auto sir = default_sir_config(n, seed);
  sir.chi = chi;
  return sir;
}

std::vector<SummaryRow> BenchReport::summary() const {
  std::vector<SummaryRow> out;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;
  std::vector<double> sums;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.planner, r.forecast, r.variant);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({r.planner, r.forecast, r.variant, 0.0, 0});
      sums.push_back(0.0);
    }
    sums[it->second] += r.value;
    ++out[it->second].count;
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k].mean = sums[k] / out[k].count;
  return out;
}

std::vector<double> BenchReport::values(const std::string& planner, const std::string& forecast,
                                        const std::string& variant) const {
  std::vector<double> out;
  for (const auto& r : rows)
    if (r.planner == planner && r.forecast == forecast && r.variant == variant) out.push_back(r.value);
  return out;
}

BenchReport run_benchmark(const BenchConfig& config) {
  config.validate();
  const auto sir = config.sir_config();
  const auto data = generate_dataset(sir, config.n_samples);
  const auto history = slice(data, 0, config.n_history);
  const auto held_out = slice(data, config.n_history, data.size());
  const auto [train, cal] = split_observations(history, config.train_fraction, config.seed);
  const auto model = fit_regressor(train);
  const auto scores = nonconformity_scores(model, cal);
  const auto inst = make_instance(sir, config.proactive_budget, config.reactive_budget, config.h_scale);
  const auto stats = history_stats(history);

  BenchReport report;
  const Forecast fixed_forecasts[] = {
      make_forecast(ForecastMethod::empirical_average, history, nullptr, nullptr),
      make_forecast(ForecastMethod::empirical_conservative, history, nullptr, nullptr),
      make_forecast(ForecastMethod::conformal_average, train, &model, nullptr)};

  std::vector<std::vector<double>> outages(3, std::vector<double>(config.n));
  for (int i = 0; i < config.n; ++i) {
    for (int k = 0; k < 3; ++k) outages[k][i] = stats.eta[i] + k * stats.sigma[i];
  }

  std::vector<SamplePlans> plans;
  bool proactive_coincide = true;
  for (const auto& rec : held_out.records) {
    SamplePlans sp;
    sp.sample_id = rec.sample_id;
    std::vector<std::string> notes;
    sp.omega = build_uncertainty_set(model, scores, config.alpha, rec.w, false, &notes);
    for (const auto& note : notes) report.warnings.push_back("sample " + std::to_string(rec.sample_id) + ": " + note);

    std::vector<Forecast> forecasts(std::begin(fixed_forecasts), std::end(fixed_forecasts));
    forecasts.push_back(make_forecast(ForecastMethod::conformal_conservative, held_out, nullptr, &sp.omega));
    for (const auto& f : forecasts) {
      sp.proactive.push_back(plan_proactive_only(inst, f));
      sp.coopt.push_back(plan_cooptimized(inst, f));
    }
    for (const auto& x : sp.proactive) proactive_coincide = proactive_coincide && x == sp.proactive[0];

    const auto start = std::chrono::steady_clock::now();
    const auto plan = benders_solve(inst, sp.omega, config.benders);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    sp.trilevel_x = plan.x;
    report.solves.push_back({rec.sample_id, plan.iterations, plan.value, plan.gap(),
                             plan.status == PlanStatus::converged, wall});
    if (config.recourse_mode == RecourseMode::fixed) {
      const auto worst = subproblem(plan.x, sp.omega, inst);
      std::vector<double> zeta(config.n);
      for (int i = 0; i < config.n; ++i) zeta[i] = inst.h()[i] * worst.u[i] * (1.0 - plan.x[i]);
      sp.trilevel_fixed_y = recourse_binary(zeta, inst.c(), inst.reactive_budget()).y;
    }
    plans.push_back(std::move(sp));
  }

  auto worst_rows = [&](const std::string& planner, const std::string& forecast, auto&& pick_x) {
    for (int v = 0; v < 3; ++v) {
      for (const auto& sp : plans) {
        const double value = worst_case_value(pick_x(sp), sp.omega, inst, kSetVariantValues[v]);
        report.rows.push_back({planner, forecast, kSetVariants[v], sp.sample_id, value});
      }
    }
  };
  auto realized_rows = [&](const std::string& planner, const std::string& forecast, auto&& pick_xy) {
    for (int v = 0; v < 3; ++v) {
      for (const auto& sp : plans) {
        const auto [x, y] = pick_xy(sp, outages[v]);
        report.rows.push_back({planner, forecast, kOutageVariants[v], sp.sample_id,
                               evaluate_recourse(inst, x, y, outages[v])});
      }
    }
  };

  if (proactive_coincide) {
    worst_rows(kProactiveOnly, kAllForecasts, [](const SamplePlans& sp) { return sp.proactive[0]; });
  } else {
    for (std::size_t k = 0; k < std::size(kForecastMethods); ++k) {
      worst_rows(kProactiveOnly, to_string(kForecastMethods[k]),
                 [k](const SamplePlans& sp) { return sp.proactive[k]; });
    }
  }
  for (std::size_t k = 0; k < std::size(kForecastMethods); ++k) {
    const auto name = to_string(kForecastMethods[k]);
    worst_rows(kCoOptimized, name, [k](const SamplePlans& sp) { return sp.coopt[k].first; });
    realized_rows(kCoOptimized, name,
                  [k](const SamplePlans& sp, const std::vector<double>&) { return sp.coopt[k]; });
  }
  worst_rows(kTriLevel, kConformalSet, [](const SamplePlans& sp) { return sp.trilevel_x; });
  realized_rows(kTriLevel, kConformalSet, [&](const SamplePlans& sp, const std::vector<double>& u) {
    if (config.recourse_mode == RecourseMode::fixed) return std::make_pair(sp.trilevel_x, sp.trilevel_fixed_y);
    std::vector<double> zeta(config.n);
    for (int i = 0; i < config.n; ++i) zeta[i] = inst.h()[i] * u[i] * (1.0 - sp.trilevel_x[i]);
    return std::make_pair(sp.trilevel_x, recourse_binary(zeta, inst.c(), inst.reactive_budget()).y);
  });
  return report;
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::chi: return "chi";
    case SweepParameter::n: return "n";
    case SweepParameter::proactive_budget: return "B";
    case SweepParameter::reactive_budget: return "C";
  }
  return "chi";
}

SweepParameter sweep_parameter_from_string(const std::string& s) {
  if (s == "chi") return SweepParameter::chi;
  if (s == "n") return SweepParameter::n;
  if (s == "B") return SweepParameter::proactive_budget;
  if (s == "C") return SweepParameter::reactive_budget;
  throw DataError("unknown sweep parameter '" + s + "' (expected chi, n, B or C)");
}

BenchConfig with_parameter(BenchConfig config, SweepParameter p, double value) {
  switch (p) {
    case SweepParameter::chi: config.chi = value; break;
    case SweepParameter::n: config.n = static_cast<int>(std::lround(value)); break;
    case SweepParameter::proactive_budget: config.proactive_budget = value; break;
    case SweepParameter::reactive_budget: config.reactive_budget = value; break;
  }
  return config;
}

SweepReport sensitivity_sweep(SweepParameter parameter, const std::vector<double>& grid,
                              const BenchConfig& config) {
  if (grid.empty()) throw DataError("sweep: grid is empty");
  SweepReport sweep;
  sweep.parameter = parameter;
  for (double v : grid) {
    if (!std::isfinite(v)) throw DataError("sweep: grid values must be finite");
    sweep.points.push_back({v, run_benchmark(with_parameter(config, parameter, v))});
  }
  return sweep;
}

std::string report_csv(const BenchReport& report) {
  std::string out = "planner,forecast,variant,sample_id,value\n";
  for (const auto& r : report.rows) {
    append(out, {r.planner, r.forecast, r.variant, std::to_string(r.sample_id), io::format_number(r.value)});
  }
  return out;
}

std::string summary_csv(const BenchReport& report) {
  std::string out = "planner,forecast,variant,mean,count\n";
  for (const auto& s : report.summary()) {
    append(out, {s.planner, s.forecast, s.variant, io::format_number(s.mean), std::to_string(s.count)});
  }
  return out;
}

std::string solves_csv(const BenchReport& report) {
  std::string out = "sample_id,iterations,value,gap,converged\n";
  for (const auto& s : report.solves) {
    append(out, {std::to_string(s.sample_id), std::to_string(s.iterations), io::format_number(s.value),
                 io::format_number(s.gap), s.converged ? "1" : "0"});
  }
  return out;
}

std::string timing_csv(const BenchReport& report) {
  std::string out = "sample_id,wall_seconds\n";
  for (const auto& s : report.solves) append(out, {std::to_string(s.sample_id), io::format_number(s.wall_seconds)});
  return out;
}

std::string summary_table(const BenchReport& report) {
  const std::vector<std::string> columns = {"local_only", "global_only", "full",
                                            "eta", "eta+sigma", "eta+2sigma"};
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::tuple<std::string, std::string, std::string>, double> means;
  for (const auto& s : report.summary()) {
    const auto key = std::make_pair(s.planner, s.forecast);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    means[{s.planner, s.forecast, s.variant}] = s.mean;
  }
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-16s %-24s", "planner", "forecast");
  out += buf;
  for (const auto& c : columns) {
    std::snprintf(buf, sizeof buf, " %14s", c.c_str());
    out += buf;
  }
  out += '\n';
  for (const auto& [planner, forecast] : keys) {
    std::snprintf(buf, sizeof buf, "%-16s %-24s", planner.c_str(), forecast.c_str());
    out += buf;
    for (const auto& c : columns) {
      const auto it = means.find({planner, forecast, c});
      if (it == means.end()) {
        std::snprintf(buf, sizeof buf, " %14s", "-");
      } else {
        std::snprintf(buf, sizeof buf, " %14.1f", it->second);
      }
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string sweep_differences_csv(const SweepReport& sweep) {
  std::string out = "parameter,value,planner,forecast,variant,sample_id,difference\n";
  const auto param = to_string(sweep.parameter);
  for (const auto& point : sweep.points) {
    std::map<std::pair<std::string, int>, double> tri;
    for (const auto& r : point.report.rows)
      if (r.planner == kTriLevel) tri[{r.variant, r.sample_id}] = r.value;
    for (const auto& r : point.report.rows) {
      if (r.planner == kTriLevel) continue;
      const auto it = tri.find({r.variant, r.sample_id});
      if (it == tri.end()) continue;
      if (r.variant != "local_only" && r.variant != "global_only" && r.variant != "full") continue;
      append(out, {param, io::format_number(point.value), r.planner, r.forecast, r.variant,
                   std::to_string(r.sample_id), io::format_number(r.value - it->second)});
    }
  }
  return out;
}

std::string sweep_points_csv(const SweepReport& sweep) {
  std::string out = "parameter,value,tri_level_mean,max_gap,mean_iterations,unconverged\n";
  const auto param = to_string(sweep.parameter);
  for (const auto& point : sweep.points) {
    const auto& solves = point.report.solves;
    double value = 0.0, gap = 0.0, iters = 0.0;
    int unconverged = 0;
    for (const auto& s : solves) {
      value += s.value;
      gap = std::max(gap, s.gap);
      iters += s.iterations;
      unconverged += s.converged ? 0 : 1;
    }
    const double m = solves.empty() ? 1.0 : static_cast<double>(solves.size());
    append(out, {param, io::format_number(point.value), io::format_number(value / m), io::format_number(gap),
                 io::format_number(iters / m), std::to_string(unconverged)});
  }
  return out;
}

std::string sweep_timing_csv(const SweepReport& sweep) {
  std::string out = "parameter,value,wall_seconds_total,wall_seconds_max\n";
  const auto param = to_string(sweep.parameter);
  for (const auto& point : sweep.points) {
    double total = 0.0, worst = 0.0;
    for (const auto& s : point.report.solves) {
      total += s.wall_seconds;
      worst = std::max(worst, s.wall_seconds);
    }
    append(out, {param, io::format_number(point.value), io::format_number(total), io::format_number(worst)});
  }
  return out;
}

}  // namespace resilience::bench
