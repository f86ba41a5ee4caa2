#include "resilience/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace resilience {

namespace {

constexpr std::uint64_t kInstanceStream = 0;
constexpr std::uint64_t kCostStream = 0x8000000000000000ULL;

double reflect_unit(double v) {
  v = std::fmod(std::abs(v), 2.0);
  return v > 1.0 ? 2.0 - v : v;
}

}  // namespace

void ObservationSet::validate() const {
  if (n < 1 || p < 1) throw DataError("ObservationSet: n and p must be positive");
  for (const auto& r : records) {
    if (r.w.rows != n || r.w.cols != p || static_cast<int>(r.u.size()) != n) {
      throw DimensionError("ObservationSet: record " + std::to_string(r.sample_id) +
                           " does not have shape " + std::to_string(n) + "x" + std::to_string(p));
    }
    for (double v : r.w.data)
      if (!std::isfinite(v)) throw DataError("ObservationSet: non-finite feature");
    for (double v : r.u)
      if (!std::isfinite(v) || v < 0.0) throw DataError("ObservationSet: outages must be finite and nonnegative");
  }
}

void SirConfig::validate() const {
  if (n < 1) throw DataError("SirConfig: n must be at least 1");
  if (static_cast<int>(nu.size()) != n || static_cast<int>(coords.size()) != n) {
    throw DimensionError("SirConfig: nu and coords must have n entries");
  }
  for (double v : nu)
    if (!(v > 0.0) || !std::isfinite(v)) throw DataError("SirConfig: populations must be positive");
  for (const auto& c : coords) {
    if (!(c[0] >= 0.0 && c[0] <= 1.0 && c[1] >= 0.0 && c[1] <= 1.0)) {
      throw DataError("SirConfig: coordinates must lie in the unit square");
    }
  }
  if (!(rho > 0.0)) throw DataError("SirConfig: rho must be positive");
  if (!(dtau > 0.0)) throw DataError("SirConfig: dtau must be positive");
  if (!(chi >= 0.0)) throw DataError("SirConfig: chi must be nonnegative");
  if (!(jitter >= 0.0)) throw DataError("SirConfig: jitter must be nonnegative");
  if (!(initial_disrupted > 0.0) || !(initial_disrupted < *std::min_element(nu.begin(), nu.end()))) {
    throw DataError("SirConfig: initial_disrupted must lie in (0, min nu)");
  }
  if (max_steps < 1) throw DataError("SirConfig: max_steps must be positive");
}

SirConfig default_sir_config(int n, std::uint64_t seed) {
  if (n < 1) throw DataError("default_sir_config: n must be at least 1");
  SirConfig config;
  config.n = n;
  config.seed = seed;
  Rng rng(seed, kInstanceStream);
  config.nu.resize(n);
  config.coords.resize(n);
  for (int i = 0; i < n; ++i) {
    config.nu[i] = rng.uniform(1000.0, 10000.0);
    config.coords[i] = {rng.uniform(), rng.uniform()};
  }
  return config;
}

Matrix weather_field(std::span<const std::array<double, 2>> coords) {
  const double two_pi = 2.0 * std::numbers::pi;
  Matrix w(static_cast<int>(coords.size()), 3);
  for (int i = 0; i < w.rows; ++i) {
    const double sq = std::sin(two_pi * coords[i][0]);
    const double cq = std::cos(two_pi * coords[i][0]);
    const double sr = std::sin(two_pi * coords[i][1]);
    const double cr = std::cos(two_pi * coords[i][1]);
    w(i, 0) = 20.0 + 5.0 * sq * cr;
    w(i, 1) = 10.0 + 3.0 * cq * sr;
    w(i, 2) = 0.5 + 0.1 * sq * cr;
  }
  return w;
}

double disruption_rate(std::span<const double> w_row) {
  if (w_row.size() != 3) throw DimensionError("disruption_rate: expected 3 weather features");
  const double beta =
      0.3 + 0.01 * (w_row[0] - 20.0) + 0.005 * (w_row[1] - 10.0) - 0.005 * (w_row[2] - 0.5);
  return std::max(beta, 1e-6);
}

SirTrajectory simulate_sir(const SirConfig& config, std::span<const double> beta) {
  config.validate();
  const int n = config.n;
  if (static_cast<int>(beta.size()) != n) throw DimensionError("simulate_sir: beta must have n entries");

  SirTrajectory tr;
  tr.n = n;
  std::vector<double> s(n), g(n), r(n, 0.0);
  for (int i = 0; i < n; ++i) {
    s[i] = config.nu[i] - config.initial_disrupted;
    g[i] = config.initial_disrupted;
  }
  auto record = [&] {
    tr.upsilon.insert(tr.upsilon.end(), s.begin(), s.end());
    tr.gamma.insert(tr.gamma.end(), g.begin(), g.end());
    tr.xi.insert(tr.xi.end(), r.begin(), r.end());
  };
  record();
  const double dt = config.dtau;
  while (*std::max_element(g.begin(), g.end()) >= 0.5) {
    if (tr.steps >= config.max_steps) {
      throw ConvergenceError("simulate_sir: no convergence after " + std::to_string(config.max_steps) +
                             " steps; max disrupted = " +
                             std::to_string(*std::max_element(g.begin(), g.end())));
    }
    for (int i = 0; i < n; ++i) {
      // Flows between compartments, each capped by its source so no state
      // goes negative; the update moves mass and so conserves nu_i.
      const double infect = std::min(beta[i] * s[i] * g[i] / config.nu[i] * dt, s[i]);
      const double recover = std::min(config.rho * g[i] * dt, g[i]);
      s[i] -= infect;
      g[i] += infect - recover;
      r[i] += recover;
    }
    ++tr.steps;
    record();
  }
  return tr;
}

std::vector<double> noiseless_outages(const SirConfig& config, const SirTrajectory& trajectory) {
  std::vector<double> u(trajectory.n, 0.0);
  for (int k = 0; k < trajectory.steps; ++k) {
    for (int i = 0; i < trajectory.n; ++i) u[i] += trajectory.at(trajectory.gamma, k, i);
  }
  for (int i = 0; i < trajectory.n; ++i) u[i] *= config.dtau / config.nu[i];
  return u;
}

std::vector<double> simulate_outages(const SirConfig& config, const SirTrajectory& trajectory,
                                     Rng& rng) {
  auto u = noiseless_outages(config, trajectory);
  for (int i = 0; i < trajectory.n; ++i) {
    u[i] = std::max(0.0, u[i] + rng.normal() * config.chi / config.nu[i]);
  }
  return u;
}

ObservationSet generate_dataset(const SirConfig& config, int n_samples,
                                const TrajectoryObserver& observer) {
  config.validate();
  if (n_samples < 1) throw DataError("generate_dataset: n_samples must be at least 1");
  ObservationSet out;
  out.n = config.n;
  out.p = 3;
  out.records.resize(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    Rng rng(config.seed, static_cast<std::uint64_t>(k) + 1);
    std::vector<std::array<double, 2>> coords(config.coords);
    for (auto& c : coords) {
      c[0] = reflect_unit(c[0] + rng.uniform(-config.jitter, config.jitter));
      c[1] = reflect_unit(c[1] + rng.uniform(-config.jitter, config.jitter));
    }
    Observation obs;
    obs.sample_id = k;
    obs.w = weather_field(coords);
    std::vector<double> beta(config.n);
    for (int i = 0; i < config.n; ++i) beta[i] = disruption_rate(obs.w.row(i));
    const auto trajectory = simulate_sir(config, beta);
    if (observer) observer(k, trajectory);
    obs.u = simulate_outages(config, trajectory, rng);
    out.records[k] = std::move(obs);
  }
  return out;
}

Instance make_instance(const SirConfig& config, double proactive_budget, double reactive_budget,
                       double h_scale) {
  config.validate();
  if (!(h_scale > 0.0)) throw DataError("make_instance: h_scale must be positive");
  Rng rng(config.seed, kCostStream);
  std::vector<double> b(config.n), c(config.n, 1.0), h(config.n);
  for (int i = 0; i < config.n; ++i) {
    b[i] = rng.uniform(100.0, 1000.0);
    h[i] = h_scale * config.nu[i];
  }
  return Instance(b, c, h, proactive_budget, reactive_budget);
}

}  // namespace resilience
