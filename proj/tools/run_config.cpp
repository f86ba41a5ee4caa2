#include "run_config.hpp"

#include <set>

#include "resilience/io.hpp"

namespace resilience::cli {

using nlohmann::json;

void RunConfig::validate() const {
  if (n < 1) throw UsageError("n must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0,1)");
  if (!(epsilon >= 0.0)) throw UsageError("epsilon must be nonnegative");
  if (!(relative_epsilon >= 0.0)) throw UsageError("relative epsilon must be nonnegative");
  if (max_iter < 1) throw UsageError("max-iter must be at least 1");
  if (!(chi >= 0.0)) throw UsageError("chi must be nonnegative");
  if (n_samples < 1) throw UsageError("n-samples must be at least 1");
  if (n_history < 4) throw UsageError("n-history must be at least 4");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw UsageError("train-fraction must lie in (0,1)");
  if (!(proactive_budget >= 0.0) || !(reactive_budget >= 0.0)) throw UsageError("budgets must be nonnegative");
  if (!(h_scale > 0.0)) throw UsageError("h_scale must be positive");
  if (sweep_grid.empty()) throw UsageError("sweep grid is empty");
}

SirConfig RunConfig::sir_config() const {
  json j = simulator;
  j["n"] = n;
  j["seed"] = seed;
  j["chi"] = chi;
  return io::sir_config_from_json(j);
}

BendersOptions RunConfig::benders_options() const {
  BendersOptions o;
  o.epsilon = epsilon;
  o.relative_epsilon = relative_epsilon;
  o.max_iter = max_iter;
  o.cut_mode = cut_mode;
  return o;
}

bench::BenchConfig RunConfig::bench_config() const {
  bench::BenchConfig b;
  b.n = n;
  b.seed = seed;
  b.chi = chi;
  b.n_samples = n_samples;
  b.n_history = n_history;
  b.train_fraction = train_fraction;
  b.alpha = alpha;
  b.proactive_budget = proactive_budget;
  b.reactive_budget = reactive_budget;
  b.h_scale = h_scale;
  b.recourse_mode = recourse_mode;
  b.benders = benders_options();
  return b;
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("config: expected a JSON object");
  static const std::set<std::string> known = {
      "n", "seed", "chi", "n_samples", "n_history", "train_fraction", "alpha", "B", "C", "h_scale",
      "epsilon", "relative_epsilon", "max_iter", "cut_mode", "recourse_mode", "simulator",
      "instance", "data", "set", "plan", "out_dir", "sweep"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw UsageError("config: unknown key '" + key + "'");
  }
  RunConfig c;
  try {
    c.n = j.value("n", c.n);
    c.seed = j.value("seed", c.seed);
    c.chi = j.value("chi", c.chi);
    c.n_samples = j.value("n_samples", c.n_samples);
    c.n_history = j.value("n_history", c.n_history);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.alpha = j.value("alpha", c.alpha);
    c.proactive_budget = j.value("B", c.proactive_budget);
    c.reactive_budget = j.value("C", c.reactive_budget);
    c.h_scale = j.value("h_scale", c.h_scale);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.relative_epsilon = j.value("relative_epsilon", c.relative_epsilon);
    c.max_iter = j.value("max_iter", c.max_iter);
    if (j.contains("cut_mode")) c.cut_mode = cut_mode_from_string(j.at("cut_mode").get<std::string>());
    if (j.contains("recourse_mode")) {
      c.recourse_mode = bench::recourse_mode_from_string(j.at("recourse_mode").get<std::string>());
    }
    if (j.contains("simulator")) c.simulator = j.at("simulator");
    if (j.contains("instance")) c.instance_file = j.at("instance").get<std::string>();
    if (j.contains("data")) c.data_file = j.at("data").get<std::string>();
    if (j.contains("set")) c.set_file = j.at("set").get<std::string>();
    if (j.contains("plan")) c.plan_file = j.at("plan").get<std::string>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      c.sweep_parameter = s.value("parameter", c.sweep_parameter);
      if (s.contains("grid")) c.sweep_grid = s.at("grid").get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  } catch (const DataError& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return c;
}

json to_json(const RunConfig& c) {
  return json{{"n", c.n},
              {"seed", c.seed},
              {"chi", c.chi},
              {"n_samples", c.n_samples},
              {"n_history", c.n_history},
              {"train_fraction", c.train_fraction},
              {"alpha", c.alpha},
              {"B", c.proactive_budget},
              {"C", c.reactive_budget},
              {"h_scale", c.h_scale},
              {"epsilon", c.epsilon},
              {"relative_epsilon", c.relative_epsilon},
              {"max_iter", c.max_iter},
              {"cut_mode", to_string(c.cut_mode)},
              {"recourse_mode", bench::to_string(c.recourse_mode)},
              {"simulator", c.simulator},
              {"sweep", json{{"parameter", c.sweep_parameter}, {"grid", c.sweep_grid}}}};
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    auto field = text.substr(start, end - start);
    field.erase(0, field.find_first_not_of(" \t"));
    field.erase(field.find_last_not_of(" \t") + 1);
    if (field.empty()) throw UsageError("grid: empty entry in '" + text + "'");
    try {
      out.push_back(io::parse_number(field));
    } catch (const DataError&) {
      throw UsageError("grid: '" + field + "' is not a number");
    }
    start = end + 1;
  }
  return out;
}

}  // namespace resilience::cli
