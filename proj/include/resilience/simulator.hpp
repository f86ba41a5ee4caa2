#pragma once

// Synthetic outage history: smooth weather fields over the unit square drive
// per-region disruption rates, and independent unaffected/disrupted/recovered
// dynamics turn them into outage totals.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "resilience/model.hpp"
#include "resilience/observations.hpp"
#include "resilience/random.hpp"

namespace resilience {

struct SirConfig {
  int n = 10;
  std::vector<double> nu;                    // customers per region
  std::vector<std::array<double, 2>> coords; // region centers in [0,1]^2
  double rho = 0.1;
  double dtau = 0.1;
  double chi = 0.1;
  double initial_disrupted = 1.0;
  double jitter = 0.05;
  std::uint64_t seed = 1;
  std::int64_t max_steps = 1'000'000;

  void validate() const;
};

/// Populations uniform on [1000, 10000] and centers uniform on the unit
/// square, drawn from the instance stream of `seed`.
SirConfig default_sir_config(int n, std::uint64_t seed);

/// n x 3 matrix of temperature, wind speed and humidity.
Matrix weather_field(std::span<const std::array<double, 2>> coords);

double disruption_rate(std::span<const double> w_row);

struct SirTrajectory {
  int n = 0;
  int steps = 0;  // Euler steps taken; states hold steps + 1 rows
  std::vector<double> upsilon;  // (steps + 1) x n, row-major
  std::vector<double> gamma;
  std::vector<double> xi;

  [[nodiscard]] double at(const std::vector<double>& v, int step, int i) const {
    return v[static_cast<std::size_t>(step) * n + i];
  }
};

SirTrajectory simulate_sir(const SirConfig& config, std::span<const double> beta);

/// Left Riemann sum of disrupted customers per customer, without noise.
std::vector<double> noiseless_outages(const SirConfig& config, const SirTrajectory& trajectory);

/// Riemann sum plus Gaussian noise with standard deviation chi / nu_i,
/// clipped at zero.
std::vector<double> simulate_outages(const SirConfig& config, const SirTrajectory& trajectory,
                                     Rng& rng);

/// One observation per sample: jittered centers, weather, rates, outages.
/// Sample k draws from stream k + 1 of the config seed. `observer`, when set,
/// sees every sample's trajectory before it is discarded.
using TrajectoryObserver = std::function<void(int sample_id, const SirTrajectory&)>;
ObservationSet generate_dataset(const SirConfig& config, int n_samples,
                                const TrajectoryObserver& observer = {});

/// Instance matching a simulated region set: h = h_scale * nu, c = 1 and
/// proactive costs uniform on [100, 1000] from the instance stream.
Instance make_instance(const SirConfig& config, double proactive_budget, double reactive_budget,
                       double h_scale = 1.0);

}  // namespace resilience
