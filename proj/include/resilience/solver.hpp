#pragma once

// Tri-level planner: continuous recourse, the dualized worst-case subproblem,
// Benders decomposition over the proactive decision, and exhaustive oracles.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "resilience/lp.hpp"
#include "resilience/model.hpp"

namespace resilience {

struct RecourseSolution {
  std::vector<double> y;
  double value = 0.0;       // sum_i zeta_i (1 - y_i)
  double lambda = 0.0;      // dual of the budget row, <= 0
  std::vector<double> mu;   // duals of y_i <= 1, <= 0
  double dual_value = 0.0;  // C lambda + sum mu + sum zeta
};

/// Continuous recourse: min sum zeta_i (1 - y_i) over the box-and-budget
/// relaxation of the reactive set, with its budget and upper-bound duals.
RecourseSolution recourse_lp(std::span<const double> zeta, std::span<const double> c, double budget);

struct BinaryRecourse {
  std::vector<double> y;
  double value = 0.0;
};

/// Exact binary recourse through branch and bound; valid for arbitrary c.
BinaryRecourse recourse_binary(std::span<const double> zeta, std::span<const double> c,
                               double budget);

struct SubproblemSolution {
  std::vector<double> u;
  double lambda = 0.0;
  std::vector<double> mu;
  double phi = 0.0;
};

/// Worst case over the outage set for a fixed proactive plan, with the
/// continuous recourse replaced by its LP dual. Throws InfeasibleError when
/// the outage set is empty.
SubproblemSolution subproblem(std::span<const double> x_bar, const UncertaintySet& omega,
                              const Instance& inst);

/// Linear lower model of the worst-case cost: theta >= constant + slope . x,
/// valid at every binary x.
struct OptimalityCut {
  double constant = 0.0;
  std::vector<double> slope;

  [[nodiscard]] double at(std::span<const double> x) const;
};

/// Slope of the optimality cut built from the subproblem's worst-case outages
/// and budget dual: phi_i = -min(h_i u_i, -c_i lambda).
std::vector<double> subgradient(const SubproblemSolution& sub, std::span<const double> x_bar,
                                const Instance& inst);

/// theta >= Phi(x_bar) + phi^T (x - x_bar), with the intercept evaluated in
/// closed form so the cut stays valid even if the subproblem is slightly off.
OptimalityCut subgradient_cut(const SubproblemSolution& sub, std::span<const double> x_bar,
                              const Instance& inst);

/// theta >= Phi(x_bar) (1 - sum_{i: x_bar_i = 0} x_i).
OptimalityCut nogood_cut(double phi, std::span<const double> x_bar);

enum class CutMode { subgradient, nogood, both };

std::string to_string(CutMode mode);
CutMode cut_mode_from_string(const std::string& s);

struct BendersOptions {
  double epsilon = 1e-6;           // absolute gap
  double relative_epsilon = 0.0;   // stop also when gap <= relative_epsilon * |upper bound|
  int max_iter = 200;
  CutMode cut_mode = CutMode::both;
  lp::MilpOptions master;
};

struct TraceEntry {
  int iteration = 0;
  double phi_plus = 0.0;   // best worst-case value found so far (upper bound)
  double phi_minus = 0.0;  // master value (lower bound)
  std::vector<double> x;   // master proposal at this iteration
  double phi_at_x = 0.0;
  std::int64_t master_nodes = 0;
  double wall_seconds = 0.0;  // cumulative
};

enum class PlanStatus { converged, iteration_limit };

std::string to_string(PlanStatus s);

struct PlanResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<TraceEntry> trace;
  int iterations = 0;
  PlanStatus status = PlanStatus::converged;
  std::vector<OptimalityCut> cuts;

  [[nodiscard]] double phi_plus() const { return trace.empty() ? value : trace.back().phi_plus; }
  [[nodiscard]] double phi_minus() const { return trace.empty() ? value : trace.back().phi_minus; }
  [[nodiscard]] double gap() const { return phi_plus() - phi_minus(); }
};

PlanResult benders_solve(const Instance& inst, const UncertaintySet& omega,
                         const BendersOptions& options = {});

/// All budget-feasible binary recourse actions that cannot be extended by
/// another affordable region. Throws ResourceError beyond `limit` actions.
std::vector<std::vector<double>> maximal_reactive_actions(const Instance& inst,
                                                          std::size_t limit = 100000);

/// Exact max-min value for a fixed plan via the epigraph LP over every
/// maximal budget-feasible binary recourse action. Independent of the duals
/// used by `subproblem`.
double worst_case_value(std::span<const double> x_bar, const UncertaintySet& omega,
                        const Instance& inst, SetVariant variant = SetVariant::full);

/// Exhaustive search over budget-feasible plans (n <= 20), scored with
/// worst_case_value; ties go to the lexicographically smallest plan.
PlanResult enumerate_solve(const Instance& inst, const UncertaintySet& omega);

}  // namespace resilience
