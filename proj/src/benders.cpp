#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "resilience/lp.hpp"
#include "resilience/solver.hpp"

namespace resilience {

std::string to_string(CutMode mode) {
  switch (mode) {
    case CutMode::subgradient: return "subgradient";
    case CutMode::nogood: return "nogood";
    case CutMode::both: return "both";
  }
  return "both";
}

CutMode cut_mode_from_string(const std::string& s) {
  if (s == "subgradient") return CutMode::subgradient;
  if (s == "nogood") return CutMode::nogood;
  if (s == "both") return CutMode::both;
  throw DataError("unknown cut mode '" + s + "' (expected subgradient, nogood or both)");
}

std::string to_string(PlanStatus s) {
  return s == PlanStatus::converged ? "converged" : "iteration_limit";
}

namespace {

std::vector<char> as_key(const std::vector<double>& x) {
  std::vector<char> key(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) key[i] = x[i] > 0.5 ? 1 : 0;
  return key;
}

void add_cut(lp::LinearProgram& master, const OptimalityCut& cut) {
  // theta - slope . x >= constant
  const int n = static_cast<int>(cut.slope.size());
  std::vector<double> row(n + 1);
  for (int i = 0; i < n; ++i) row[i] = -cut.slope[i];
  row[n] = 1.0;
  master.add_row(std::move(row), lp::Relation::greater_equal, cut.constant);
}

}  // namespace

PlanResult benders_solve(const Instance& inst, const UncertaintySet& omega,
                         const BendersOptions& options) {
  omega.validate();
  if (omega.n() != inst.n()) throw DimensionError("benders_solve: outage set size differs from instance");
  if (!(options.epsilon >= 0.0) || !(options.relative_epsilon >= 0.0)) {
    throw DataError("benders_solve: epsilon must be nonnegative");
  }
  if (options.max_iter < 1) throw DataError("benders_solve: max_iter must be at least 1");

  const int n = inst.n();
  const auto start = std::chrono::steady_clock::now();

  lp::LinearProgram master(lp::Sense::minimize);
  for (int i = 0; i < n; ++i) master.add_variable(0.0, 0.0, 1.0, true);
  const int theta = master.add_variable(1.0, 0.0, lp::kInf);
  master.add_row(inst.b(), lp::Relation::less_equal, inst.proactive_budget(), "budget");

  PlanResult result;
  result.status = PlanStatus::iteration_limit;
  double upper = lp::kInf;
  double lower = 0.0;
  std::set<std::vector<char>> visited;

  for (int t = 1; t <= options.max_iter; ++t) {
    const auto sol = lp::solve_milp(master, options.master);
    if (sol.status != lp::LpStatus::optimal) {
      throw InfeasibleError("benders_solve: master problem has no optimal solution");
    }
    std::vector<double> x(sol.x.begin(), sol.x.begin() + n);
    lower = std::max(lower, sol.objective);

    TraceEntry entry;
    entry.iteration = t;
    entry.x = x;
    entry.master_nodes = sol.nodes;

    const bool seen = !visited.insert(as_key(x)).second;
    if (seen) {
      // Every cut is tight at its own x, so the master already prices x exactly.
      entry.phi_at_x = upper;
      lower = std::max(lower, upper);
    } else {
      const auto sub = subproblem(x, omega, inst);
      entry.phi_at_x = sub.phi;
      if (sub.phi < upper) {
        upper = sub.phi;
        result.x = x;
      }
      if (options.cut_mode != CutMode::nogood) {
        result.cuts.push_back(subgradient_cut(sub, x, inst));
        add_cut(master, result.cuts.back());
      }
      if (options.cut_mode != CutMode::subgradient) {
        result.cuts.push_back(nogood_cut(sub.phi, x));
        add_cut(master, result.cuts.back());
      }
    }
    lower = std::min(lower, upper);
    entry.phi_plus = upper;
    entry.phi_minus = lower;
    entry.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.push_back(std::move(entry));
    result.iterations = t;

    const double gap = upper - lower;
    if (gap <= options.epsilon || gap <= options.relative_epsilon * std::abs(upper)) {
      result.status = PlanStatus::converged;
      break;
    }
  }
  (void)theta;
  result.value = upper;
  return result;
}

}  // namespace resilience
