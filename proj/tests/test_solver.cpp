#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "doctest.h"
#include "resilience/lp.hpp"
#include "resilience/solver.hpp"
#include "support.hpp"

using namespace resilience;
using testing_support::random_instance;
using testing_support::random_plan;
using testing_support::random_set;
using testing_support::uniform;

namespace {

// Best binary recourse by trying every y.
double brute_recourse(const std::vector<double>& zeta, const std::vector<double>& c, double budget,
                      std::vector<double>* best_y = nullptr) {
  const int n = static_cast<int>(zeta.size());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << n); ++mask) {
    double spend = 0.0, value = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) spend += c[i];
      else value += zeta[i];
    }
    if (spend <= budget && value < best) {
      best = value;
      if (best_y) {
        best_y->assign(n, 0.0);
        for (int i = 0; i < n; ++i) (*best_y)[i] = mask >> i & 1;
      }
    }
  }
  return best;
}

// Epigraph LP over every budget-feasible binary y (not only maximal ones).
double brute_worst_case(const std::vector<double>& x, const UncertaintySet& s, const Instance& inst) {
  const int n = inst.n();
  lp::LinearProgram prog(lp::Sense::maximize);
  for (int i = 0; i < n; ++i) prog.add_variable(0.0, s.local_lower[i], s.local_upper[i]);
  prog.add_variable(1.0, -lp::kInf, lp::kInf);
  for (int mask = 0; mask < (1 << n); ++mask) {
    double spend = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) spend += inst.c()[i];
    if (spend > inst.reactive_budget()) continue;
    std::vector<double> row(n + 1, 0.0);
    for (int i = 0; i < n; ++i) row[i] = (mask >> i & 1) ? 0.0 : -inst.h()[i] * (1.0 - x[i]);
    row[n] = 1.0;
    prog.add_row(row, lp::Relation::less_equal, 0.0);
  }
  prog.add_row(std::vector<double>(n, 1.0), lp::Relation::greater_equal, s.global_lower);
  prog.add_row(std::vector<double>(n, 1.0), lp::Relation::less_equal, s.global_upper);
  return lp::solve_lp(prog).objective;
}

// Best plan by trying every budget-feasible x.
double brute_plan(const Instance& inst, const UncertaintySet& s) {
  const int n = inst.n();
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<double> x(n);
    double spend = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = mask >> i & 1;
      spend += inst.b()[i] * x[i];
    }
    if (spend <= inst.proactive_budget()) best = std::min(best, brute_worst_case(x, s, inst));
  }
  return best;
}

std::vector<double> random_zeta(std::mt19937_64& rng, int n, bool distinct) {
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = distinct ? uniform(rng, 0.1, 100.0) : std::floor(uniform(rng, 0, 4));
  return z;
}

}  // namespace

TEST_CASE("recourse worked examples") {
  const std::vector<double> ones3(3, 1.0);
  auto r = recourse_lp(std::vector<double>{0, 0, 0}, ones3, 1);
  CHECK(r.value == doctest::Approx(0.0));

  r = recourse_lp(std::vector<double>{5, 9, 2}, ones3, 1);
  CHECK(r.value == doctest::Approx(7.0));
  CHECK(r.y[0] == doctest::Approx(0.0));
  CHECK(r.y[1] == doctest::Approx(1.0));
  CHECK(r.y[2] == doctest::Approx(0.0));
  CHECK(r.lambda <= 0.0);

  r = recourse_lp(std::vector<double>{5, 9, 2}, ones3, 4);
  CHECK(r.value == doctest::Approx(0.0));
  for (double y : r.y) CHECK(y == doctest::Approx(1.0));

  auto b = recourse_binary(std::vector<double>{10, 1}, std::vector<double>{2, 1}, 2);
  CHECK(b.value == doctest::Approx(1.0));
  CHECK(b.y == std::vector<double>{1, 0});

  b = recourse_binary(std::vector<double>{3, 3}, std::vector<double>{1, 1}, 1);
  CHECK(b.value == doctest::Approx(3.0));

  CHECK_THROWS_AS(recourse_lp(std::vector<double>{1}, ones3, 1), DimensionError);
  CHECK_THROWS_AS(recourse_lp(std::vector<double>{-1}, std::vector<double>{1}, 1), DataError);
}

TEST_CASE("recourse strong duality and sign conventions") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 20);
    std::vector<double> c(n);
    for (auto& v : c) v = trial % 2 ? 1.0 : uniform(rng, 0.5, 3.0);
    const auto zeta = random_zeta(rng, n, trial % 3 != 0);
    const double budget = std::floor(uniform(rng, 0, n + 1));
    const auto r = recourse_lp(zeta, c, budget);
    CHECK(std::abs(r.value - r.dual_value) <= 1e-8 * (1 + std::abs(r.value)));
    CHECK(r.lambda <= 1e-12);
    for (double m : r.mu) CHECK(m <= 1e-12);
    double spend = 0.0;
    for (int i = 0; i < n; ++i) {
      spend += c[i] * r.y[i];
      // dual feasibility of  c_i lambda + mu_i <= -zeta_i
      CHECK(c[i] * r.lambda + r.mu[i] <= -zeta[i] + 1e-8);
    }
    CHECK(spend <= budget + 1e-8);
  }
}

TEST_CASE("continuous recourse is integral for unit costs") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const std::vector<double> c(n, 1.0);
    const auto zeta = random_zeta(rng, n, true);
    const double budget = 1 + static_cast<double>(rng() % 5);
    const auto r = recourse_lp(zeta, c, budget);
    for (double y : r.y) CHECK(std::min(std::abs(y), std::abs(1 - y)) <= 1e-6);
    const auto b = recourse_binary(zeta, c, budget);
    CHECK(r.value == doctest::Approx(b.value).epsilon(1e-12));
    CHECK(b.value == doctest::Approx(brute_recourse(zeta, c, budget)).epsilon(1e-12));
  }
}

TEST_CASE("binary recourse matches enumeration for general costs") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    std::vector<double> c(n);
    for (auto& v : c) v = uniform(rng, 0.5, 3.0);
    const auto zeta = random_zeta(rng, n, true);
    const double budget = uniform(rng, 0, 6);
    const auto b = recourse_binary(zeta, c, budget);
    CHECK(b.value == doctest::Approx(brute_recourse(zeta, c, budget)).epsilon(1e-10));
  }
}

TEST_CASE("subproblem worked examples") {
  const Instance inst({1, 1}, {1, 1}, {1, 1}, 0, 1);
  const UncertaintySet s{{0, 0}, {5, 5}, 0, 6, 0.1};
  const auto sub = subproblem(std::vector<double>{0, 0}, s, inst);
  // Nature splits 3/3: whichever region is restored, the other still costs 3.
  CHECK(sub.phi == doctest::Approx(3.0));
  CHECK(sub.phi == doctest::Approx(worst_case_value(std::vector<double>{0, 0}, s, inst)));
  CHECK(sub.phi == doctest::Approx(brute_worst_case({0, 0}, s, inst)));

  CHECK(subproblem(std::vector<double>{1, 1}, s, inst).phi == doctest::Approx(0.0));
  CHECK(worst_case_value(std::vector<double>{1, 1}, s, inst) == doctest::Approx(0.0));

  const Instance covered({1, 1}, {1, 1}, {1, 1}, 0, 2);
  CHECK(subproblem(std::vector<double>{0, 0}, s, covered).phi == doctest::Approx(0.0));

  UncertaintySet empty = s;
  empty.global_lower = 20;
  empty.global_upper = 30;
  CHECK_THROWS_AS(subproblem(std::vector<double>{0, 0}, empty, inst), InfeasibleError);
}

TEST_CASE("subproblem agrees with epigraph oracles") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto inst = random_instance(rng, n, uniform(rng, 0, 3000), static_cast<double>(rng() % 4));
    const auto s = random_set(rng, n);
    const auto x = random_plan(rng, inst);
    const auto sub = subproblem(x, s, inst);
    const double oracle = brute_worst_case(x, s, inst);
    CHECK(sub.phi == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(worst_case_value(x, s, inst) == doctest::Approx(oracle).epsilon(1e-9));
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(sub.u[i] >= s.local_lower[i] - 1e-8);
      CHECK(sub.u[i] <= s.local_upper[i] + 1e-8);
      total += sub.u[i];
    }
    CHECK(total >= s.global_lower - 1e-8);
    CHECK(total <= s.global_upper + 1e-8);
    for (int i = 0; i < n; ++i) {
      CHECK(inst.c()[i] * sub.lambda + sub.mu[i] <= -inst.h()[i] * sub.u[i] * (1 - x[i]) + 1e-8);
    }
  }
}

TEST_CASE("optimality cuts are valid on every plan and tight at their own") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto inst = random_instance(rng, n, 1e9, static_cast<double>(rng() % 3));
    const auto s = random_set(rng, n);
    const auto xbar = random_plan(rng, inst);
    const auto sub = subproblem(xbar, s, inst);
    const auto cut = subgradient_cut(sub, xbar, inst);
    const auto good = nogood_cut(sub.phi, xbar);
    const auto phi = subgradient(sub, xbar, inst);
    for (double g : phi) CHECK(g <= 0.0);
    CHECK(cut.at(xbar) == doctest::Approx(sub.phi).epsilon(1e-9));
    CHECK(good.at(xbar) == doctest::Approx(sub.phi).epsilon(1e-12));
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<double> x(n);
      for (int i = 0; i < n; ++i) x[i] = mask >> i & 1;
      const double truth = brute_worst_case(x, s, inst);
      CHECK(cut.at(x) <= truth + 1e-6);
      CHECK(good.at(x) <= truth + 1e-6);
    }
    // one-coordinate finite difference
    for (int i = 0; i < n; ++i) {
      if (xbar[i] == 1.0) continue;
      auto flipped = xbar;
      flipped[i] = 1.0;
      CHECK(subproblem(flipped, s, inst).phi >= sub.phi + phi[i] - 1e-6);
    }
  }
}

TEST_CASE("benders matches enumeration") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto inst = random_instance(rng, n, uniform(rng, 0, 2500), static_cast<double>(rng() % 3));
    const auto s = random_set(rng, n);
    for (CutMode mode : {CutMode::both, CutMode::nogood, CutMode::subgradient}) {
      BendersOptions opt;
      opt.cut_mode = mode;
      opt.max_iter = 1 << (n + 1);
      const auto plan = benders_solve(inst, s, opt);
      if (mode != CutMode::subgradient) REQUIRE(plan.status == PlanStatus::converged);
      if (plan.status != PlanStatus::converged) continue;
      const auto exact = enumerate_solve(inst, s);
      CHECK(plan.value == doctest::Approx(exact.value).epsilon(1e-9));
      CHECK(exact.value == doctest::Approx(brute_plan(inst, s)).epsilon(1e-9));
      CHECK(feasible_proactive(plan.x, inst));
      CHECK(worst_case_value(plan.x, s, inst) == doctest::Approx(plan.value).epsilon(1e-9));
      for (std::size_t t = 1; t < plan.trace.size(); ++t) {
        CHECK(plan.trace[t].phi_plus <= plan.trace[t - 1].phi_plus);
        CHECK(plan.trace[t].phi_minus >= plan.trace[t - 1].phi_minus);
      }
      for (const auto& e : plan.trace) {
        CHECK(e.phi_minus <= exact.value + 1e-6);
        CHECK(e.phi_plus >= exact.value - 1e-6);
      }
      for (const auto& cut : plan.cuts) CHECK(cut.at(exact.x) <= exact.value + 1e-6);
    }
  }
}

TEST_CASE("benders budget extremes") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    auto inst = random_instance(rng, n, 0, 1);
    const auto s = random_set(rng, n);
    auto plan = benders_solve(inst, s);
    CHECK(plan.status == PlanStatus::converged);
    CHECK(plan.x == std::vector<double>(n, 0.0));
    CHECK(plan.value == doctest::Approx(subproblem(plan.x, s, inst).phi));
    CHECK(plan.iterations <= 2);

    const double total = std::accumulate(inst.b().begin(), inst.b().end(), 0.0);
    inst = inst.with_budgets(total, 1);
    plan = benders_solve(inst, s);
    CHECK(plan.status == PlanStatus::converged);
    CHECK(plan.value == doctest::Approx(0.0));
    CHECK(worst_case_value(plan.x, s, inst) == doctest::Approx(0.0));
  }
}

TEST_CASE("enumeration value is monotone in the proactive budget") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto inst = random_instance(rng, n, 0, static_cast<double>(rng() % 3));
    const auto s = random_set(rng, n);
    double previous = std::numeric_limits<double>::infinity();
    for (double budget : {0.0, 300.0, 800.0, 1500.0, 3000.0, 6000.0}) {
      const double v = enumerate_solve(inst.with_budgets(budget, inst.reactive_budget()), s).value;
      CHECK(v <= previous + 1e-9);
      previous = v;
    }
  }
  const Instance one({5}, {1}, {3}, 5, 0);
  const UncertaintySet s{{1}, {2}, 1, 2, 0.1};
  const auto r = enumerate_solve(one, s);
  CHECK(r.x == std::vector<double>{1});
  CHECK(r.value == 0.0);
}

TEST_CASE("benders options and iteration limit") {
  std::mt19937_64 rng(81);
  const auto inst = random_instance(rng, 8, 1500, 1);
  const auto s = random_set(rng, 8);
  BendersOptions opt;
  opt.max_iter = 1;
  const auto plan = benders_solve(inst, s, opt);
  CHECK(plan.status == PlanStatus::iteration_limit);
  CHECK(plan.iterations == 1);
  CHECK(plan.gap() > 0.0);
  opt.max_iter = 0;
  CHECK_THROWS_AS(benders_solve(inst, s, opt), DataError);
  CHECK(cut_mode_from_string("nogood") == CutMode::nogood);
  CHECK_THROWS_AS(cut_mode_from_string("bogus"), DataError);
}

TEST_CASE("reactive action enumeration") {
  const Instance inst({1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, 0, 2);
  const auto acts = maximal_reactive_actions(inst);
  CHECK(acts.size() == 6);
  for (const auto& y : acts) CHECK(std::accumulate(y.begin(), y.end(), 0.0) == 2.0);
  CHECK_THROWS_AS(maximal_reactive_actions(inst, 3), ResourceError);
}
