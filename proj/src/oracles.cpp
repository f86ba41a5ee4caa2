#include <algorithm>
#include <functional>

#include "resilience/lp.hpp"
#include "resilience/solver.hpp"

namespace resilience {

std::vector<std::vector<double>> maximal_reactive_actions(const Instance& inst, std::size_t limit) {
  const int n = inst.n();
  const auto& c = inst.c();
  const double budget = inst.reactive_budget();
  std::vector<std::vector<double>> out;
  std::vector<double> y(n, 0.0);

  auto is_maximal = [&](double spend) {
    for (int i = 0; i < n; ++i) {
      if (y[i] == 0.0 && spend + c[i] <= budget) return false;
    }
    return true;
  };
  std::function<void(int, double)> dfs = [&](int i, double spend) {
    if (i == n) {
      if (is_maximal(spend)) {
        if (out.size() >= limit) {
          throw ResourceError("too many reactive actions to enumerate (more than " +
                              std::to_string(limit) + "); use the dual subproblem instead");
        }
        out.push_back(y);
      }
      return;
    }
    if (spend + c[i] <= budget) {
      y[i] = 1.0;
      dfs(i + 1, spend + c[i]);
      y[i] = 0.0;
    }
    dfs(i + 1, spend);
  };
  dfs(0, 0.0);
  return out;
}

namespace {

double epigraph_value(std::span<const double> x_bar, const UncertaintySet& omega, const Instance& inst,
                      const std::vector<std::vector<double>>& actions) {
  const int n = inst.n();
  lp::LinearProgram prog(lp::Sense::maximize);
  for (int i = 0; i < n; ++i) prog.add_variable(0.0, omega.local_lower[i], omega.local_upper[i]);
  const int t = prog.add_variable(1.0, -lp::kInf, lp::kInf);
  for (const auto& y : actions) {
    std::vector<double> row(n + 1, 0.0);
    for (int i = 0; i < n; ++i) row[i] = -inst.h()[i] * (1.0 - x_bar[i]) * (1.0 - y[i]);
    row[t] = 1.0;
    prog.add_row(std::move(row), lp::Relation::less_equal, 0.0);
  }
  std::vector<double> ones(n, 1.0);
  prog.add_row(ones, lp::Relation::greater_equal, omega.global_lower);
  prog.add_row(ones, lp::Relation::less_equal, omega.global_upper);
  const auto sol = lp::solve_lp(prog);
  if (sol.status == lp::LpStatus::infeasible) throw InfeasibleError("worst_case_value: outage set is empty");
  if (sol.status != lp::LpStatus::optimal) throw InfeasibleError("worst_case_value: unbounded worst case");
  return std::max(0.0, sol.objective);
}

}  // namespace

double worst_case_value(std::span<const double> x_bar, const UncertaintySet& omega,
                        const Instance& inst, SetVariant variant) {
  if (static_cast<int>(x_bar.size()) != inst.n() || omega.n() != inst.n()) {
    throw DimensionError("worst_case_value: plan, outage set and instance sizes differ");
  }
  const auto actions = maximal_reactive_actions(inst);
  return epigraph_value(x_bar, restrict_set(omega, variant), inst, actions);
}

PlanResult enumerate_solve(const Instance& inst, const UncertaintySet& omega) {
  const int n = inst.n();
  if (n > 20) throw ResourceError("enumerate_solve: n must be at most 20");
  if (omega.n() != n) throw DimensionError("enumerate_solve: outage set size differs from instance");
  omega.validate();
  const auto actions = maximal_reactive_actions(inst);

  PlanResult best;
  best.value = lp::kInf;
  std::vector<double> x(n, 0.0);
  // Lexicographic order: 0 before 1 at each position, so the first strict
  // improvement wins ties.
  std::function<void(int, double)> dfs = [&](int i, double spend) {
    if (i == n) {
      const double v = epigraph_value(x, omega, inst, actions);
      if (v < best.value) {
        best.value = v;
        best.x = x;
      }
      return;
    }
    dfs(i + 1, spend);
    if (spend + inst.b()[i] <= inst.proactive_budget()) {
      x[i] = 1.0;
      dfs(i + 1, spend + inst.b()[i]);
      x[i] = 0.0;
    }
  };
  dfs(0, 0.0);
  best.iterations = 1;
  best.status = PlanStatus::converged;
  return best;
}

}  // namespace resilience
