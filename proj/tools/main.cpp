#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "resilience/bench.hpp"
#include "resilience/conformal.hpp"
#include "resilience/io.hpp"
#include "resilience/simulator.hpp"
#include "resilience/solver.hpp"
#include "run_config.hpp"

using namespace resilience;
using resilience::cli::RunConfig;
using resilience::cli::UsageError;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIterationLimit = 2, kInfeasible = 3 };

struct Flags {
  std::string config;
  double alpha = 0, epsilon = 0, relative_epsilon = 0, chi = 0, budget_proactive = 0,
         budget_reactive = 0, train_fraction = 0;
  std::uint64_t seed = 0;
  int n = 0, n_samples = 0, n_history = 0, max_iter = 0, sample = -1;
  std::string cut_mode, recourse_mode, instance, data, set, plan, out_dir, parameter, grid;
  bool oracle = false;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;

  template <class T>
  void add(CLI::App* app, const std::string& name, T& target, const std::string& help,
           std::function<void(RunConfig&)> apply) {
    overrides.emplace_back(app->add_option(name, target, help), std::move(apply));
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config.empty()) {
      c = cli::run_config_from_json(io::parse_json(io::read_file(config), "config '" + config + "'"));
    }
    try {
      for (const auto& [opt, apply] : overrides)
        if (opt->count() > 0) apply(c);
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
    c.validate();
    return c;
  }
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON run configuration; flags override its values");
  f.add(app, "--n", f.n, "number of regions", [&f](RunConfig& c) { c.n = f.n; });
  f.add(app, "--seed", f.seed, "master random seed", [&f](RunConfig& c) { c.seed = f.seed; });
  f.add(app, "--chi", f.chi, "outage noise level", [&f](RunConfig& c) { c.chi = f.chi; });
  f.add(app, "--n-samples", f.n_samples, "simulated samples in total",
        [&f](RunConfig& c) { c.n_samples = f.n_samples; });
  f.add(app, "--n-history", f.n_history, "samples used for training and calibration; the rest is held out",
        [&f](RunConfig& c) { c.n_history = f.n_history; });
  f.add(app, "--train-fraction", f.train_fraction, "share of the history used to fit the regressor",
        [&f](RunConfig& c) { c.train_fraction = f.train_fraction; });
  f.add(app, "--alpha", f.alpha, "miscoverage level in (0,1)", [&f](RunConfig& c) { c.alpha = f.alpha; });
  f.add(app, "--budget-proactive", f.budget_proactive, "proactive budget B",
        [&f](RunConfig& c) { c.proactive_budget = f.budget_proactive; });
  f.add(app, "--budget-reactive", f.budget_reactive, "reactive budget C",
        [&f](RunConfig& c) { c.reactive_budget = f.budget_reactive; });
  f.add(app, "--epsilon", f.epsilon, "absolute Benders gap tolerance",
        [&f](RunConfig& c) { c.epsilon = f.epsilon; });
  f.add(app, "--relative-epsilon", f.relative_epsilon, "relative Benders gap tolerance",
        [&f](RunConfig& c) { c.relative_epsilon = f.relative_epsilon; });
  f.add(app, "--max-iter", f.max_iter, "Benders iteration limit", [&f](RunConfig& c) { c.max_iter = f.max_iter; });
  f.add(app, "--cut-mode", f.cut_mode, "subgradient, nogood or both",
        [&f](RunConfig& c) { c.cut_mode = cut_mode_from_string(f.cut_mode); });
  f.add(app, "--recourse-mode", f.recourse_mode, "tri-level recourse in realized-outage rows: reoptimize or fixed",
        [&f](RunConfig& c) { c.recourse_mode = bench::recourse_mode_from_string(f.recourse_mode); });
  f.add(app, "--instance", f.instance, "instance JSON (default: built from the simulator config)",
        [&f](RunConfig& c) { c.instance_file = f.instance; });
  f.add(app, "--data", f.data, "observation CSV (default: simulated from the config)",
        [&f](RunConfig& c) { c.data_file = f.data; });
  f.add(app, "--out-dir", f.out_dir, "directory for output files", [&f](RunConfig& c) { c.out_dir = f.out_dir; });
}

ObservationSet load_or_generate(const RunConfig& c) {
  if (!c.data_file.empty()) return io::observations_from_csv(io::read_file(c.data_file));
  return generate_dataset(c.sir_config(), c.n_samples);
}

Instance load_or_make_instance(const RunConfig& c, const Flags& f, const CLI::App* app) {
  if (c.instance_file.empty()) {
    return make_instance(c.sir_config(), c.proactive_budget, c.reactive_budget, c.h_scale);
  }
  auto inst = io::instance_from_json(io::parse_json(io::read_file(c.instance_file), "instance"));
  const bool b_flag = app->get_option("--budget-proactive")->count() > 0;
  const bool c_flag = app->get_option("--budget-reactive")->count() > 0;
  if (b_flag || c_flag) {
    inst = inst.with_budgets(b_flag ? f.budget_proactive : inst.proactive_budget(),
                             c_flag ? f.budget_reactive : inst.reactive_budget());
  }
  return inst;
}

struct Calibration {
  Regressor model;
  CalibrationScores scores;
  UncertaintySet omega;
  int sample_id = 0;
  ObservationSet held_out;
};

// Fits on the first n_history records and builds the set for one record's
// weather: `sample` indexes the data, default the first held-out record.
Calibration calibrate(const RunConfig& c, const ObservationSet& data, int sample) {
  const std::size_t history = std::min<std::size_t>(c.n_history, data.size());
  ObservationSet hist{data.n, data.p, {data.records.begin(), data.records.begin() + history}};
  auto [train, cal] = split_observations(hist, c.train_fraction, c.seed);
  Calibration out;
  out.model = fit_regressor(train);
  out.scores = nonconformity_scores(out.model, cal);
  out.held_out = ObservationSet{data.n, data.p, {data.records.begin() + history, data.records.end()}};
  std::size_t index = sample >= 0 ? static_cast<std::size_t>(sample)
                                  : (history < data.size() ? history : data.size() - 1);
  if (index >= data.size()) throw UsageError("--sample is past the end of the data");
  const auto& rec = data.records[index];
  out.sample_id = rec.sample_id;
  std::vector<std::string> warnings;
  out.omega = build_uncertainty_set(out.model, out.scores, c.alpha, rec.w, false, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return out;
}

void write(const fs::path& path, const std::string& content) {
  io::write_file_atomic(path, content);
  std::cout << "wrote " << path.string() << "\n";
}

int cmd_generate(const RunConfig& c, const Flags& f, const CLI::App* app) {
  const auto sir = c.sir_config();
  const auto data = generate_dataset(sir, c.n_samples);
  write(c.out_dir / "observations.csv", io::observations_csv(data));
  write(c.out_dir / "instance.json", io::dump_json(io::to_json(load_or_make_instance(c, f, app))));
  write(c.out_dir / "simulator.json", io::dump_json(io::to_json(sir)));
  double lo = 1e300, hi = 0.0, sum = 0.0;
  for (const auto& r : data.records) {
    double total = 0.0;
    for (double u : r.u) total += u;
    lo = std::min(lo, total);
    hi = std::max(hi, total);
    sum += total;
  }
  std::printf("samples %zu, regions %d, total outage min %.4f mean %.4f max %.4f\n", data.size(), data.n, lo,
              sum / static_cast<double>(data.size()), hi);
  return kOk;
}

int cmd_calibrate(const RunConfig& c, const Flags& f) {
  const auto data = load_or_generate(c);
  const auto cal = calibrate(c, data, f.sample);
  write(c.out_dir / "set.json", io::dump_json(io::to_json(cal.omega)));
  write(c.out_dir / "model.json", io::dump_json(io::to_json(cal.model)));
  std::printf("set for sample %d: global [%.6g, %.6g]\n", cal.sample_id, cal.omega.global_lower,
              cal.omega.global_upper);
  if (!cal.held_out.empty()) {
    const auto rep = empirical_coverage(cal.model, cal.scores, c.alpha, cal.held_out);
    double local = 0.0;
    for (double r : rep.local_rates) local += r;
    std::printf("held-out coverage: mean local %.3f, global %.3f, joint %.3f over %zu samples\n",
                local / static_cast<double>(rep.local_rates.size()), rep.global_rate, rep.joint_rate,
                cal.held_out.size());
  }
  return kOk;
}

UncertaintySet load_or_calibrate_set(const RunConfig& c, const Flags& f) {
  if (!c.set_file.empty()) {
    return io::uncertainty_set_from_json(io::parse_json(io::read_file(c.set_file), "set"));
  }
  auto omega = calibrate(c, load_or_generate(c), f.sample).omega;
  write(c.out_dir / "set.json", io::dump_json(io::to_json(omega)));
  return omega;
}

int cmd_plan(const RunConfig& c, const Flags& f, const CLI::App* app) {
  const auto inst = load_or_make_instance(c, f, app);
  const auto omega = load_or_calibrate_set(c, f);
  if (omega.n() != inst.n()) throw DimensionError("set and instance disagree on the region count");
  const auto plan = benders_solve(inst, omega, c.benders_options());
  write(c.out_dir / "plan.json", io::dump_json(io::to_json(plan)));
  write(c.out_dir / "trace.csv", io::trace_csv(plan));
  std::printf("status %s, value %.10g, gap %.3g, iterations %d\n", to_string(plan.status).c_str(), plan.value,
              plan.gap(), plan.iterations);
  std::cout << "x =";
  for (double x : plan.x) std::cout << ' ' << x;
  std::cout << "\n";
  if (f.oracle) {
    const auto exact = enumerate_solve(inst, omega);
    const double tol = 1e-6 * (1.0 + std::abs(exact.value));
    std::printf("oracle value %.10g\n", exact.value);
    if (std::abs(exact.value - plan.value) > tol) {
      std::cerr << "error: Benders value differs from exhaustive search\n";
      return kUsage;
    }
  }
  return plan.status == PlanStatus::converged ? kOk : kIterationLimit;
}

int cmd_evaluate(const RunConfig& c, const Flags& f, const CLI::App* app) {
  if (c.plan_file.empty()) throw UsageError("evaluate needs --plan");
  const auto inst = load_or_make_instance(c, f, app);
  const auto omega = load_or_calibrate_set(c, f);
  const auto plan = io::parse_json(io::read_file(c.plan_file), "plan");
  if (!plan.contains("x")) throw DataError("plan: missing key 'x'");
  const auto x = plan.at("x").get<std::vector<double>>();
  if (static_cast<int>(x.size()) != inst.n()) throw DimensionError("plan and instance disagree on n");
  if (!feasible_proactive(x, inst)) throw DataError("plan: x is not a budget-feasible binary vector");
  nlohmann::json out = {{"x", x}};
  for (auto v : {SetVariant::local_only, SetVariant::global_only, SetVariant::full}) {
    const double value = worst_case_value(x, omega, inst, v);
    out[to_string(v)] = value;
    std::printf("%-12s %.10g\n", to_string(v).c_str(), value);
  }
  write(c.out_dir / "evaluation.json", io::dump_json(out));
  return kOk;
}

int cmd_bench(const RunConfig& c) {
  const auto report = bench::run_benchmark(c.bench_config());
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  write(c.out_dir / "bench.csv", bench::report_csv(report));
  write(c.out_dir / "summary.csv", bench::summary_csv(report));
  write(c.out_dir / "solves.csv", bench::solves_csv(report));
  write(c.out_dir / "timing.csv", bench::timing_csv(report));
  const auto table = bench::summary_table(report);
  write(c.out_dir / "table.txt", table);
  std::cout << table;
  for (const auto& s : report.solves)
    if (!s.converged) return kIterationLimit;
  return kOk;
}

int cmd_sweep(const RunConfig& c) {
  const auto parameter = bench::sweep_parameter_from_string(c.sweep_parameter);
  const auto sweep = bench::sensitivity_sweep(parameter, c.sweep_grid, c.bench_config());
  write(c.out_dir / "sweep_differences.csv", bench::sweep_differences_csv(sweep));
  write(c.out_dir / "sweep_points.csv", bench::sweep_points_csv(sweep));
  write(c.out_dir / "sweep_timing.csv", bench::sweep_timing_csv(sweep));
  std::string summary = "parameter,value,planner,forecast,variant,mean,count\n";
  for (const auto& point : sweep.points) {
    for (const auto& s : point.report.summary()) {
      summary += bench::to_string(parameter) + ',' + io::format_number(point.value) + ',' + s.planner + ',' +
                 s.forecast + ',' + s.variant + ',' + io::format_number(s.mean) + ',' + std::to_string(s.count) +
                 '\n';
    }
  }
  write(c.out_dir / "sweep_summary.csv", summary);
  std::cout << bench::sweep_points_csv(sweep);
  for (const auto& point : sweep.points)
    for (const auto& s : point.report.solves)
      if (!s.converged) return kIterationLimit;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilience planning: simulate outage history, calibrate outage sets, plan and benchmark."};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("generate", "simulate an outage history and write it with the instance");
  auto* cal = app.add_subcommand("calibrate", "fit the predictor and write the outage set for one sample");
  auto* plan = app.add_subcommand("plan", "calibrate if needed, then solve the tri-level problem");
  auto* eval = app.add_subcommand("evaluate", "worst-case cost of a stored plan under each set variant");
  auto* bench_cmd = app.add_subcommand("bench", "compare the tri-level planner with the deterministic planners");
  auto* sweep = app.add_subcommand("sweep", "repeat the benchmark along a parameter grid");
  for (auto* sub : {gen, cal, plan, eval, bench_cmd, sweep}) add_common(sub, f);
  for (auto* sub : {cal, plan, eval}) {
    sub->add_option("--sample", f.sample, "data row whose weather defines the set (default: first held-out)");
  }
  for (auto* sub : {plan, eval}) {
    f.add(sub, "--set", f.set, "outage set JSON (default: calibrate)", [&f](RunConfig& c) { c.set_file = f.set; });
  }
  plan->add_flag("--oracle", f.oracle, "cross-check the value against exhaustive search");
  f.add(eval, "--plan", f.plan, "plan JSON with the proactive decision x",
        [&f](RunConfig& c) { c.plan_file = f.plan; });
  f.add(sweep, "--parameter", f.parameter, "chi, n, B or C",
        [&f](RunConfig& c) { c.sweep_parameter = f.parameter; });
  f.add(sweep, "--grid", f.grid, "comma-separated grid values",
        [&f](RunConfig& c) { c.sweep_grid = cli::parse_grid(f.grid); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    const auto config = f.resolve();
    if (gen->parsed()) return cmd_generate(config, f, gen);
    if (cal->parsed()) return cmd_calibrate(config, f);
    if (plan->parsed()) return cmd_plan(config, f, plan);
    if (eval->parsed()) return cmd_evaluate(config, f, eval);
    if (bench_cmd->parsed()) return cmd_bench(config);
    if (sweep->parsed()) return cmd_sweep(config);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible input: " << e.what() << "\n";
    return kInfeasible;
  } catch (const CoverageInfeasibleError& e) {
    std::cerr << "infeasible input: " << e.what() << "\n";
    return kInfeasible;
  } catch (const CalibrationError& e) {
    std::cerr << "infeasible input: " << e.what() << "\n";
    return kInfeasible;
  } catch (const DataError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInfeasible;
  } catch (const DimensionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
