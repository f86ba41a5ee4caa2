#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "resilience/model.hpp"
#include "support.hpp"

using namespace resilience;

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(Instance({}, {}, {}, 0, 0), DataError);
  CHECK_THROWS_AS(Instance({1, 1}, {1}, {1, 1}, 0, 0), DimensionError);
  CHECK_THROWS_AS(Instance({1}, {1}, {0}, 0, 0), DataError);
  CHECK_THROWS_AS(Instance({1}, {1}, {1}, -1, 0), DataError);
  CHECK_NOTHROW(Instance({1}, {1}, {1}, 0, 0));
}

TEST_CASE("proactive feasibility") {
  const Instance inst({100, 1000}, {1, 1}, {1, 1}, 1000, 1);
  CHECK(feasible_proactive(std::vector<double>{0, 0}, inst));
  CHECK_FALSE(feasible_proactive(std::vector<double>{1, 1}, inst));
  CHECK(feasible_proactive(std::vector<double>{0, 1}, inst));
  CHECK_FALSE(feasible_proactive(std::vector<double>{0.5, 0}, inst));
  CHECK_THROWS_AS(feasible_proactive(std::vector<double>{0}, inst), DimensionError);
}

TEST_CASE("reactive feasibility") {
  const Instance one({1, 1, 1}, {1, 1, 1}, {1, 1, 1}, 0, 1);
  CHECK(feasible_reactive(std::vector<double>{0, 0, 0}, one));
  CHECK_FALSE(feasible_reactive(std::vector<double>{1, 1, 0}, one));
  const Instance full({1, 1, 1}, {1, 1, 1}, {1, 1, 1}, 0, 3);
  CHECK(feasible_reactive(std::vector<double>{1, 1, 1}, full));
  CHECK_THROWS_AS(feasible_reactive(std::vector<double>{1}, full), DimensionError);
}

TEST_CASE("outage cost") {
  const Instance one({1}, {1}, {2}, 0, 0);
  CHECK(outage_cost(one, std::vector<double>{0}, std::vector<double>{3}, std::vector<double>{0}) == 6.0);
  CHECK(outage_cost(one, std::vector<double>{1}, std::vector<double>{3}, std::vector<double>{0}) == 0.0);
  const Instance two({1, 1}, {1, 1}, {1, 10}, 0, 0);
  CHECK(outage_cost(two, std::vector<double>{0, 0}, std::vector<double>{5, 1}, std::vector<double>{1, 0}) ==
        10.0);
  CHECK_THROWS_AS(outage_cost(two, std::vector<double>{0}, std::vector<double>{5, 1},
                              std::vector<double>{1, 0}),
                  DimensionError);
}

TEST_CASE("membership") {
  UncertaintySet s{{1, 2}, {3, 4}, 3, 6, 0.1};
  CHECK(membership(s.local_lower, s));
  CHECK_FALSE(membership(std::vector<double>{4, 2}, s));
  CHECK_FALSE(membership(s.local_upper, s));  // 7 > 6
  CHECK_THROWS_AS(membership(std::vector<double>{1}, s), DimensionError);
}

TEST_CASE("uncertainty set validation and variants") {
  UncertaintySet s{{1, 2}, {3, 4}, 3, 6, 0.1};
  CHECK_NOTHROW(s.validate());
  UncertaintySet bad = s;
  bad.global_lower = 8;
  bad.global_upper = 9;
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = s;
  bad.local_lower[0] = 5;
  CHECK_THROWS_AS(bad.validate(), DataError);

  const auto local = restrict_set(s, SetVariant::local_only);
  CHECK(local.global_lower == 3.0);
  CHECK(local.global_upper == 7.0);
  const auto global = restrict_set(s, SetVariant::global_only);
  CHECK(global.local_lower == std::vector<double>{0, 0});
  CHECK(global.local_upper == std::vector<double>{6, 6});
  CHECK(set_variant_from_string(to_string(SetVariant::global_only)) == SetVariant::global_only);
  CHECK_THROWS_AS(set_variant_from_string("nope"), DataError);
}

TEST_CASE("outage cost properties") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto inst = testing_support::random_instance(rng, n, 1e9, 1);
    std::vector<double> x(n), y(n), u(n);
    for (int i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % 2);
      y[i] = testing_support::uniform(rng, 0, 1) < 0.3 ? 1.0 : testing_support::uniform(rng, 0, 1);
      u[i] = testing_support::uniform(rng, 0, 30);
    }
    const double base = outage_cost(inst, x, u, y);
    CHECK(base >= 0.0);
    for (int i = 0; i < n; ++i) {
      auto x2 = x;
      x2[i] = 1.0;
      CHECK(outage_cost(inst, x2, u, y) <= base + 1e-9);
      auto y2 = y;
      y2[i] = 1.0;
      CHECK(outage_cost(inst, x, u, y2) <= base + 1e-9);
    }
    // changing u on covered regions does not matter
    auto u2 = u;
    for (int i = 0; i < n; ++i)
      if (x[i] == 1.0 || y[i] == 1.0) u2[i] = testing_support::uniform(rng, 0, 100);
    CHECK(outage_cost(inst, x, u2, y) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("membership is permutation invariant") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    auto s = testing_support::random_set(rng, n);
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = testing_support::uniform(rng, s.local_lower[i], s.local_upper[i] + 2);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto p = s;
    std::vector<double> pu(n);
    for (int i = 0; i < n; ++i) {
      p.local_lower[i] = s.local_lower[perm[i]];
      p.local_upper[i] = s.local_upper[perm[i]];
      pu[i] = u[perm[i]];
    }
    CHECK(membership(u, s) == membership(pu, p));
  }
}
