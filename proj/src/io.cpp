#include "resilience/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <system_error>

namespace resilience::io {

namespace fs = std::filesystem;

namespace {

// JSON has no infinities; they travel as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

double get_number(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(j.get<std::string>());
  throw DataError(what + ": expected a number");
}

json number_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> get_array(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw DataError(what + ": missing key '" + key + "'");
  const auto& a = j.at(key);
  if (!a.is_array()) throw DataError(what + ": '" + key + "' must be an array");
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& e : a) out.push_back(get_number(e, what + "." + key));
  return out;
}

double get_scalar(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw DataError(what + ": missing key '" + key + "'");
  return get_number(j.at(key), what + "." + key);
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
      field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int parse_int(std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_number(std::string_view text) {
  if (text == "inf" || text == "Infinity") return std::numeric_limits<double>::infinity();
  if (text == "-inf" || text == "-Infinity") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw DataError("expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at '" + path.string() + "'");
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(what + ": invalid JSON: " + e.what());
  }
}

json to_json(const Instance& inst) {
  return json{{"n", inst.n()},
              {"b", number_array(inst.b())},
              {"c", number_array(inst.c())},
              {"h", number_array(inst.h())},
              {"B", number(inst.proactive_budget())},
              {"C", number(inst.reactive_budget())}};
}

Instance instance_from_json(const json& j) {
  const std::string what = "instance";
  if (!j.is_object()) throw DataError(what + ": expected an object");
  Instance inst(get_array(j, "b", what), get_array(j, "c", what), get_array(j, "h", what),
                get_scalar(j, "B", what), get_scalar(j, "C", what));
  if (j.contains("n") && j.at("n").get<int>() != inst.n()) {
    throw DimensionError(what + ": 'n' does not match the array lengths");
  }
  return inst;
}

json to_json(const UncertaintySet& omega) {
  return json{{"alpha", number(omega.alpha)},
              {"local_lower", number_array(omega.local_lower)},
              {"local_upper", number_array(omega.local_upper)},
              {"global_lower", number(omega.global_lower)},
              {"global_upper", number(omega.global_upper)}};
}

UncertaintySet uncertainty_set_from_json(const json& j) {
  const std::string what = "uncertainty set";
  if (!j.is_object()) throw DataError(what + ": expected an object");
  UncertaintySet omega;
  omega.alpha = get_scalar(j, "alpha", what);
  omega.local_lower = get_array(j, "local_lower", what);
  omega.local_upper = get_array(j, "local_upper", what);
  omega.global_lower = get_scalar(j, "global_lower", what);
  omega.global_upper = get_scalar(j, "global_upper", what);
  omega.validate();
  return omega;
}

json to_json(const SirConfig& config) {
  json coords = json::array();
  for (const auto& c : config.coords) coords.push_back(json::array({c[0], c[1]}));
  return json{{"n", config.n},
              {"nu", number_array(config.nu)},
              {"coords", coords},
              {"rho", config.rho},
              {"dtau", config.dtau},
              {"chi", config.chi},
              {"initial_disrupted", config.initial_disrupted},
              {"jitter", config.jitter},
              {"seed", config.seed},
              {"max_steps", config.max_steps}};
}

SirConfig sir_config_from_json(const json& j) {
  const std::string what = "simulator config";
  if (!j.is_object()) throw DataError(what + ": expected an object");
  try {
    const int n = j.value("n", 10);
    const std::uint64_t seed = j.value("seed", std::uint64_t{1});
    SirConfig config = default_sir_config(n, seed);
    if (j.contains("nu")) config.nu = get_array(j, "nu", what);
    if (j.contains("coords")) {
      config.coords.clear();
      for (const auto& c : j.at("coords")) {
        if (!c.is_array() || c.size() != 2) throw DataError(what + ": coords entries must be pairs");
        config.coords.push_back({c[0].get<double>(), c[1].get<double>()});
      }
    }
    config.rho = j.value("rho", config.rho);
    config.dtau = j.value("dtau", config.dtau);
    config.chi = j.value("chi", config.chi);
    config.initial_disrupted = j.value("initial_disrupted", config.initial_disrupted);
    config.jitter = j.value("jitter", config.jitter);
    config.max_steps = j.value("max_steps", config.max_steps);
    config.validate();
    return config;
  } catch (const json::exception& e) {
    throw DataError(what + ": " + e.what());
  }
}

json to_json(const Regressor& model) {
  json coef = json::array();
  for (const auto& row : model.coef) coef.push_back(number_array(row));
  return json{{"n", model.n}, {"p", model.p}, {"coef", coef}};
}

Regressor regressor_from_json(const json& j) {
  const std::string what = "regressor";
  try {
    Regressor model;
    model.n = j.at("n").get<int>();
    model.p = j.at("p").get<int>();
    for (const auto& row : j.at("coef")) {
      std::vector<double> r;
      for (const auto& e : row) r.push_back(get_number(e, what));
      if (static_cast<int>(r.size()) != model.p + 1) throw DimensionError(what + ": bad coefficient row");
      model.coef.push_back(std::move(r));
    }
    if (static_cast<int>(model.coef.size()) != model.n) throw DimensionError(what + ": bad row count");
    return model;
  } catch (const json::exception& e) {
    throw DataError(what + ": " + e.what());
  }
}

json to_json(const PlanResult& plan) {
  json trace = json::array();
  for (const auto& t : plan.trace) {
    trace.push_back(json{{"iter", t.iteration},
                         {"phi_plus", number(t.phi_plus)},
                         {"phi_minus", number(t.phi_minus)},
                         {"phi_at_x", number(t.phi_at_x)},
                         {"x", number_array(t.x)},
                         {"master_nodes", t.master_nodes}});
  }
  return json{{"x", number_array(plan.x)},
              {"value", number(plan.value)},
              {"status", to_string(plan.status)},
              {"iterations", plan.iterations},
              {"phi_plus", number(plan.phi_plus())},
              {"phi_minus", number(plan.phi_minus())},
              {"gap", number(plan.gap())},
              {"trace", trace}};
}

std::string observations_csv(const ObservationSet& data) {
  std::string out = "sample_id,region_id,u";
  for (int j = 0; j < data.p; ++j) out += ",f" + std::to_string(j + 1);
  out += '\n';
  for (const auto& r : data.records) {
    for (int i = 0; i < data.n; ++i) {
      out += std::to_string(r.sample_id) + ',' + std::to_string(i) + ',' + format_number(r.u[i]);
      for (int j = 0; j < data.p; ++j) out += ',' + format_number(r.w(i, j));
      out += '\n';
    }
  }
  return out;
}

ObservationSet observations_from_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw DataError("observations: empty file");
  const auto header = split_line(lines[0]);
  if (header.size() < 4 || header[0] != "sample_id" || header[1] != "region_id" || header[2] != "u") {
    throw DataError("observations: header must be sample_id,region_id,u,f1..fp");
  }
  const int p = static_cast<int>(header.size()) - 3;

  // Rows may come in any order; samples keep the order of first appearance.
  std::vector<int> order;
  std::map<int, std::map<int, std::vector<double>>> rows;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto f = split_line(lines[k]);
    if (static_cast<int>(f.size()) != p + 3) {
      throw DataError("observations: line " + std::to_string(k + 1) + " has " +
                      std::to_string(f.size()) + " fields, expected " + std::to_string(p + 3));
    }
    const int sid = parse_int(f[0]);
    const int rid = parse_int(f[1]);
    if (!rows.contains(sid)) order.push_back(sid);
    auto& sample = rows[sid];
    if (sample.contains(rid)) {
      throw DataError("observations: duplicate row for sample " + std::to_string(sid) + " region " +
                      std::to_string(rid));
    }
    std::vector<double> values(p + 1);
    for (int j = 0; j <= p; ++j) values[j] = parse_number(f[2 + j]);
    sample[rid] = std::move(values);
  }
  if (order.empty()) throw DataError("observations: no data rows");
  const int n = static_cast<int>(rows[order[0]].size());
  ObservationSet data{n, p, {}};
  for (int sid : order) {
    const auto& sample = rows[sid];
    if (static_cast<int>(sample.size()) != n || sample.begin()->first != 0 ||
        sample.rbegin()->first != n - 1) {
      throw DimensionError("observations: sample " + std::to_string(sid) + " must list regions 0.." +
                           std::to_string(n - 1));
    }
    Observation o;
    o.sample_id = sid;
    o.w = Matrix(n, p);
    o.u.resize(n);
    for (const auto& [rid, values] : sample) {
      o.u[rid] = values[0];
      for (int j = 0; j < p; ++j) o.w(rid, j) = values[j + 1];
    }
    data.records.push_back(std::move(o));
  }
  data.validate();
  return data;
}

std::string trace_csv(const PlanResult& plan) {
  std::string out = "iter,phi_plus,phi_minus,gap,wall_seconds\n";
  for (const auto& t : plan.trace) {
    out += std::to_string(t.iteration) + ',' + format_number(t.phi_plus) + ',' +
           format_number(t.phi_minus) + ',' + format_number(t.phi_plus - t.phi_minus) + ',' +
           format_number(t.wall_seconds) + '\n';
  }
  return out;
}

}  // namespace resilience::io
