#include <algorithm>
#include <cmath>

#include "resilience/lp.hpp"
#include "resilience/solver.hpp"

namespace resilience {

SubproblemSolution subproblem(std::span<const double> x_bar, const UncertaintySet& omega,
                              const Instance& inst) {
  const int n = inst.n();
  if (static_cast<int>(x_bar.size()) != n || omega.n() != n) {
    throw DimensionError("subproblem: plan, outage set and instance sizes differ");
  }
  // Variables: u_0..u_{n-1}, lambda, mu_0..mu_{n-1}.
  lp::LinearProgram prog(lp::Sense::maximize);
  std::vector<double> weight(n);
  for (int i = 0; i < n; ++i) {
    weight[i] = inst.h()[i] * (1.0 - x_bar[i]);
    prog.add_variable(weight[i], omega.local_lower[i], omega.local_upper[i]);
  }
  const int lambda = prog.add_variable(inst.reactive_budget(), -lp::kInf, 0.0);
  for (int i = 0; i < n; ++i) prog.add_variable(1.0, -lp::kInf, 0.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(2 * n + 1, 0.0);
    row[i] = weight[i];
    row[lambda] = inst.c()[i];
    row[lambda + 1 + i] = 1.0;
    prog.add_row(std::move(row), lp::Relation::less_equal, 0.0);
  }
  std::vector<double> ones(n, 1.0);
  prog.add_row(ones, lp::Relation::greater_equal, omega.global_lower, "global_lower");
  prog.add_row(ones, lp::Relation::less_equal, omega.global_upper, "global_upper");

  const auto sol = lp::solve_lp(prog);
  if (sol.status == lp::LpStatus::infeasible) {
    throw InfeasibleError("subproblem: outage set is empty");
  }
  if (sol.status != lp::LpStatus::optimal) {
    throw InfeasibleError("subproblem: worst case is unbounded (outage set must be bounded)");
  }
  SubproblemSolution out;
  out.u.assign(sol.x.begin(), sol.x.begin() + n);
  out.lambda = sol.x[lambda];
  out.mu.assign(sol.x.begin() + lambda + 1, sol.x.end());
  out.phi = std::max(0.0, sol.objective);
  return out;
}

double OptimalityCut::at(std::span<const double> x) const {
  double v = constant;
  for (std::size_t i = 0; i < slope.size(); ++i) v += slope[i] * x[i];
  return v;
}

namespace {

// Per-region weight of the cut: for fixed outages u and budget price lambda,
// an unprotected region contributes min(h_i u_i, -c_i lambda).
std::vector<double> cut_weights(const SubproblemSolution& sub, const Instance& inst) {
  std::vector<double> m(inst.n());
  const double price = std::max(0.0, -sub.lambda);
  for (int i = 0; i < inst.n(); ++i) {
    m[i] = std::min(inst.h()[i] * std::max(0.0, sub.u[i]), inst.c()[i] * price);
  }
  return m;
}

}  // namespace

std::vector<double> subgradient(const SubproblemSolution& sub, std::span<const double> x_bar,
                                const Instance& inst) {
  if (static_cast<int>(x_bar.size()) != inst.n() || static_cast<int>(sub.u.size()) != inst.n()) {
    throw DimensionError("subgradient: size mismatch");
  }
  auto m = cut_weights(sub, inst);
  for (double& v : m) v = -v;
  return m;
}

OptimalityCut subgradient_cut(const SubproblemSolution& sub, std::span<const double> x_bar,
                              const Instance& inst) {
  const auto phi = subgradient(sub, x_bar, inst);
  OptimalityCut cut;
  // theta >= C lambda + sum_i (1 - x_i) m_i  with  m_i = -phi_i
  cut.constant = inst.reactive_budget() * std::min(0.0, sub.lambda);
  for (double g : phi) cut.constant -= g;
  cut.slope = phi;
  return cut;
}

OptimalityCut nogood_cut(double phi, std::span<const double> x_bar) {
  OptimalityCut cut;
  cut.constant = phi;
  cut.slope.assign(x_bar.size(), 0.0);
  for (std::size_t i = 0; i < x_bar.size(); ++i) {
    if (x_bar[i] < 0.5) cut.slope[i] = -phi;
  }
  return cut;
}

}  // namespace resilience
