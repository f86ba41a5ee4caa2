#pragma once

// File formats: JSON for instances, outage sets, simulator configs and plans;
// CSV for observation histories and convergence traces. Numbers are written
// in shortest round-trip form, so reading a file back gives the same doubles.

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "resilience/conformal.hpp"
#include "resilience/model.hpp"
#include "resilience/observations.hpp"
#include "resilience/simulator.hpp"
#include "resilience/solver.hpp"

namespace resilience::io {

using nlohmann::json;

/// Shortest decimal text that parses back to exactly `v`; "inf", "-inf" and
/// "nan" for the non-finite values.
std::string format_number(double v);
double parse_number(std::string_view text);

/// Writes to a sibling temp file and renames it over `path`. Parent
/// directories are created. Throws Error on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Pretty JSON text with shortest round-trip numbers.
std::string dump_json(const json& j);
json parse_json(std::string_view text, const std::string& what);

json to_json(const Instance& inst);
Instance instance_from_json(const json& j);

json to_json(const UncertaintySet& omega);
UncertaintySet uncertainty_set_from_json(const json& j);

/// Every field is written. When reading, missing nu/coords are drawn as in
/// default_sir_config(n, seed) and other missing fields keep their defaults.
json to_json(const SirConfig& config);
SirConfig sir_config_from_json(const json& j);

json to_json(const Regressor& model);
Regressor regressor_from_json(const json& j);

/// x, value, status, iterations, gap and the per-iteration bounds. Timing is
/// left to the trace CSV so that plan files are reproducible.
json to_json(const PlanResult& plan);

/// Header `sample_id,region_id,u,f1..fp`, one row per (sample, region).
std::string observations_csv(const ObservationSet& data);
ObservationSet observations_from_csv(std::string_view text);

/// Header `iter,phi_plus,phi_minus,gap,wall_seconds`.
std::string trace_csv(const PlanResult& plan);

}  // namespace resilience::io
