#include <numeric>

#include "resilience/lp.hpp"
#include "resilience/solver.hpp"

namespace resilience {

namespace {

void check_recourse_input(std::span<const double> zeta, std::span<const double> c, double budget) {
  if (zeta.size() != c.size()) throw DimensionError("recourse: zeta and c differ in length");
  for (double z : zeta)
    if (!(z >= 0.0)) throw DataError("recourse: zeta must be nonnegative");
  if (!(budget >= 0.0)) throw DataError("recourse: budget must be nonnegative");
}

}  // namespace

RecourseSolution recourse_lp(std::span<const double> zeta, std::span<const double> c, double budget) {
  check_recourse_input(zeta, c, budget);
  const int n = static_cast<int>(zeta.size());
  // min -sum zeta y  s.t.  c.y <= C (lambda),  y_i <= 1 (mu_i),  y >= 0
  lp::LinearProgram prog(lp::Sense::minimize);
  for (int i = 0; i < n; ++i) prog.add_variable(-zeta[i], 0.0, lp::kInf);
  prog.add_row(std::vector<double>(c.begin(), c.end()), lp::Relation::less_equal, budget, "budget");
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = 1.0;
    prog.add_row(std::move(row), lp::Relation::less_equal, 1.0);
  }
  const auto sol = lp::solve_lp(prog);
  if (sol.status != lp::LpStatus::optimal) {
    throw InfeasibleError("recourse_lp: relaxation not optimal");
  }
  const double total = std::accumulate(zeta.begin(), zeta.end(), 0.0);
  RecourseSolution out;
  out.y = sol.x;
  out.value = total + sol.objective;
  out.lambda = sol.row_duals[0];
  out.mu.assign(sol.row_duals.begin() + 1, sol.row_duals.end());
  out.dual_value = total + budget * out.lambda + std::accumulate(out.mu.begin(), out.mu.end(), 0.0);
  return out;
}

BinaryRecourse recourse_binary(std::span<const double> zeta, std::span<const double> c, double budget) {
  check_recourse_input(zeta, c, budget);
  const int n = static_cast<int>(zeta.size());
  lp::LinearProgram prog(lp::Sense::minimize);
  for (int i = 0; i < n; ++i) prog.add_variable(-zeta[i], 0.0, 1.0, true);
  prog.add_row(std::vector<double>(c.begin(), c.end()), lp::Relation::less_equal, budget);
  const auto sol = lp::solve_milp(prog);
  if (sol.status != lp::LpStatus::optimal) {
    throw InfeasibleError("recourse_binary: no optimal solution");
  }
  BinaryRecourse out;
  out.y = sol.x;
  out.value = 0.0;
  for (int i = 0; i < n; ++i) out.value += zeta[i] * (1.0 - out.y[i]);
  return out;
}

}  // namespace resilience
