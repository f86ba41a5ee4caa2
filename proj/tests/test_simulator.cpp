#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "resilience/simulator.hpp"

using namespace resilience;

namespace {

SirConfig single_region(double nu, double initial = 1.0) {
  SirConfig c;
  c.n = 1;
  c.nu = {nu};
  c.coords = {{0.0, 0.0}};
  c.initial_disrupted = initial;
  return c;
}

// Fixed point of z = 1 - exp(-r0 z) away from the trivial root.
double final_size(double r0) {
  double z = 0.9;
  for (int k = 0; k < 200; ++k) z = 1.0 - std::exp(-r0 * z);
  return z;
}

void check_invariants(const SirConfig& c, const SirTrajectory& tr) {
  for (int k = 0; k <= tr.steps; ++k) {
    for (int i = 0; i < tr.n; ++i) {
      const double s = tr.at(tr.upsilon, k, i), g = tr.at(tr.gamma, k, i), r = tr.at(tr.xi, k, i);
      REQUIRE(s >= 0.0);
      REQUIRE(g >= 0.0);
      REQUIRE(r >= 0.0);
      REQUIRE(std::abs(s + g + r - c.nu[i]) <= 1e-9 * c.nu[i]);
      if (k > 0) {
        REQUIRE(s <= tr.at(tr.upsilon, k - 1, i));
        REQUIRE(r >= tr.at(tr.xi, k - 1, i));
      }
    }
  }
}

}  // namespace

TEST_CASE("weather field at reference points") {
  const std::vector<std::array<double, 2>> coords{{0.0, 0.0}, {0.25, 0.0}, {0.0, 0.25}};
  const auto w = weather_field(coords);
  CHECK(w(0, 0) == doctest::Approx(20.0));
  CHECK(w(0, 1) == doctest::Approx(10.0));
  CHECK(w(0, 2) == doctest::Approx(0.5));
  CHECK(w(1, 0) == doctest::Approx(25.0));
  CHECK(w(1, 1) == doctest::Approx(10.0));
  CHECK(w(1, 2) == doctest::Approx(0.6));
  CHECK(w(2, 0) == doctest::Approx(20.0));
  CHECK(w(2, 1) == doctest::Approx(13.0));
  CHECK(w(2, 2) == doctest::Approx(0.5));
}

TEST_CASE("disruption rate") {
  CHECK(disruption_rate(std::vector<double>{20, 10, 0.5}) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(disruption_rate(std::vector<double>{25, 10, 0.6}) == doctest::Approx(0.3495).epsilon(1e-14));
  CHECK(disruption_rate(std::vector<double>{20, 13, 0.5}) == doctest::Approx(0.315).epsilon(1e-14));
  CHECK(disruption_rate(std::vector<double>{-100, 10, 0.5}) == 1e-6);
  CHECK_THROWS_AS(disruption_rate(std::vector<double>{1, 2}), DimensionError);
}

TEST_CASE("disruptions decay geometrically without spread") {
  auto c = single_region(1000.0, 100.0);
  const auto tr = simulate_sir(c, std::vector<double>{0.0});
  const double factor = 1.0 - c.rho * c.dtau;
  for (int k = 0; k <= tr.steps; ++k) {
    CHECK(tr.at(tr.gamma, k, 0) == doctest::Approx(100.0 * std::pow(factor, k)).epsilon(1e-10));
    CHECK(tr.at(tr.upsilon, k, 0) == 900.0);
  }
  CHECK(tr.at(tr.gamma, tr.steps, 0) < 0.5);
  CHECK(tr.at(tr.gamma, tr.steps - 1, 0) >= 0.5);
}

TEST_CASE("tiny seed stays near the disease-free state") {
  auto c = single_region(5000.0, 1e-3);
  const auto tr = simulate_sir(c, std::vector<double>{0.3});
  for (int k = 0; k <= tr.steps; ++k) {
    CHECK(tr.at(tr.gamma, k, 0) < 0.5);
    CHECK(tr.at(tr.upsilon, k, 0) == doctest::Approx(5000.0).epsilon(1e-6));
  }
}

TEST_CASE("final size matches the closed-form equation") {
  auto c = single_region(1000.0);
  const auto tr = simulate_sir(c, std::vector<double>{0.3});
  const double z = final_size(0.3 / 0.1);
  const double observed = tr.at(tr.xi, tr.steps, 0) / 1000.0;
  CHECK(std::abs(observed - z) <= 0.02 * z);
  check_invariants(c, tr);
}

TEST_CASE("conservation and monotonicity on generated samples") {
  auto c = default_sir_config(6, 17);
  for (int k = 0; k < 5; ++k) {
    const auto tr = simulate_sir(c, std::vector<double>{0.24, 0.3, 0.35, 0.28, 0.4, 1e-6});
    check_invariants(c, tr);
  }
}

TEST_CASE("outage integral converges at first order in the step") {
  auto c = single_region(2000.0);
  std::vector<double> u;
  for (double dt : {0.2, 0.1, 0.05, 0.025}) {
    c.dtau = dt;
    u.push_back(noiseless_outages(c, simulate_sir(c, std::vector<double>{0.3}))[0]);
  }
  for (std::size_t k = 0; k + 2 < u.size(); ++k) {
    const double ratio = (u[k] - u[k + 1]) / (u[k + 1] - u[k + 2]);
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 2.5);
  }
}

TEST_CASE("outage noise has standard deviation chi / nu") {
  auto c = default_sir_config(3, 5);
  c.chi = 0.1;
  std::vector<double> beta{0.3, 0.25, 0.33};
  const auto tr = simulate_sir(c, beta);
  const auto base = noiseless_outages(c, tr);
  const int draws = 20000;
  std::vector<double> sum(3, 0.0), sq(3, 0.0);
  for (int s = 0; s < draws; ++s) {
    Rng rng(99, static_cast<std::uint64_t>(s));
    const auto u = simulate_outages(c, tr, rng);
    for (int i = 0; i < 3; ++i) {
      const double d = u[i] - base[i];
      sum[i] += d;
      sq[i] += d * d;
    }
  }
  for (int i = 0; i < 3; ++i) {
    const double mean = sum[i] / draws;
    const double sd = std::sqrt(sq[i] / draws - mean * mean);
    CHECK(std::abs(sd - c.chi / c.nu[i]) <= 0.1 * c.chi / c.nu[i]);
  }

  c.chi = 0.0;
  Rng rng(1, 1);
  CHECK(simulate_outages(c, tr, rng) == base);
}

TEST_CASE("flat trajectory gives clipped noise") {
  auto c = single_region(1000.0, 0.1);
  const auto tr = simulate_sir(c, std::vector<double>{0.3});
  CHECK(tr.steps == 0);
  Rng rng(3, 3);
  const auto u = simulate_outages(c, tr, rng);
  CHECK(u[0] >= 0.0);
  CHECK(u[0] <= 10 * c.chi / 1000.0);
}

TEST_CASE("dataset shape, determinism and positivity") {
  const auto c = default_sir_config(10, 2024);
  const auto a = generate_dataset(c, 200);
  CHECK(a.size() == 200);
  CHECK(a.n == 10);
  CHECK(a.p == 3);
  for (const auto& r : a.records) {
    CHECK(r.w.rows == 10);
    CHECK(r.w.cols == 3);
    CHECK(r.u.size() == 10);
  }
  CHECK_NOTHROW(a.validate());
  const auto b = generate_dataset(c, 200);
  CHECK(a == b);
  for (int i = 0; i < 10; ++i) {
    double mean = 0.0;
    for (const auto& r : a.records) mean += r.u[i];
    CHECK(mean / 200 > 0.0);
  }
  // A sample depends only on its own stream.
  const auto prefix = generate_dataset(c, 7);
  for (int k = 0; k < 7; ++k) CHECK(prefix.records[k] == a.records[k]);
}

TEST_CASE("configuration validation") {
  auto c = default_sir_config(3, 1);
  CHECK_NOTHROW(c.validate());
  auto bad = c;
  bad.initial_disrupted = 0.0;
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = c;
  bad.dtau = 0.0;
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = c;
  bad.nu.pop_back();
  CHECK_THROWS_AS(bad.validate(), DimensionError);
  CHECK_THROWS_AS(default_sir_config(0, 1), DataError);
  bad = c;
  bad.max_steps = 10;
  CHECK_THROWS_AS(simulate_sir(bad, std::vector<double>{0.3, 0.3, 0.3}), ConvergenceError);
}

TEST_CASE("instance from a simulated region set") {
  const auto c = default_sir_config(5, 9);
  const auto inst = make_instance(c, 1000, 1);
  CHECK(inst.n() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(inst.h()[i] == c.nu[i]);
    CHECK(inst.c()[i] == 1.0);
    CHECK(inst.b()[i] >= 100.0);
    CHECK(inst.b()[i] <= 1000.0);
    CHECK(c.nu[i] >= 1000.0);
    CHECK(c.nu[i] <= 10000.0);
  }
  CHECK(make_instance(c, 1000, 1) == inst);
}
