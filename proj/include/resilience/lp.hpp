#pragma once

// Dense linear-programming kernel: a bounded-variable primal simplex on a full
// tableau plus a best-first branch and bound for mixed-binary programs.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "resilience/error.hpp"

namespace resilience::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };
enum class Relation { less_equal, equal, greater_equal };

struct Row {
  std::vector<double> coefficients;  // may be shorter than the variable count
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
  std::string name;
};

struct LinearProgram {
  Sense sense = Sense::minimize;
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integer;
  std::vector<std::string> names;

  LinearProgram() = default;
  explicit LinearProgram(Sense s) : sense(s) {}

  int add_variable(double cost, double lo, double up, bool is_integer = false,
                   std::string name = {});
  int add_row(std::vector<double> coefficients, Relation relation, double rhs,
              std::string name = {});

  [[nodiscard]] int num_variables() const {
    return static_cast<int>(objective.size());
  }
  [[nodiscard]] int num_rows() const { return static_cast<int>(rows.size()); }
  [[nodiscard]] bool has_integers() const;

  /// Throws DimensionError / DataError on inconsistent data.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

enum class VarStatus : std::uint8_t { basic, at_lower, at_upper, free_zero };

/// Row duals and reduced costs follow one convention for both senses:
/// objective = A^T row_duals + reduced_costs, so the dual objective is
/// sum_i row_duals[i] * rhs[i] + sum_j reduced_costs[j] * x[j].
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  std::vector<VarStatus> basis;  // per structural variable
  std::vector<double> ray;       // improving direction when unbounded
  std::int64_t iterations = 0;
  std::int64_t nodes = 0;        // branch-and-bound nodes (1 for a plain LP)
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  std::int64_t max_pivots = 100000;
};

struct MilpOptions {
  LpOptions lp;
  double integrality_tol = 1e-6;
  double absolute_gap = 1e-9;
  double relative_gap = 1e-9;
  std::int64_t max_nodes = 1000000;
};

/// Solves a pure LP. Throws ConvergenceError after max_pivots pivots and
/// DataError when the integrality mask marks any variable.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

/// Solves a mixed-binary program. Integer variables must have bounds inside
/// [0, 1]. Throws NodeLimitError when max_nodes is exceeded.
LpSolution solve_milp(const LinearProgram& lp, const MilpOptions& options = {});

class NodeLimitError : public ResourceError {
 public:
  NodeLimitError(const std::string& what, std::vector<double> incumbent,
                 double incumbent_value, double bound)
      : ResourceError(what),
        incumbent(std::move(incumbent)),
        incumbent_value(incumbent_value),
        bound(bound) {}
  std::vector<double> incumbent;
  double incumbent_value;
  double bound;
};

/// Residuals of an optimal solution against the optimality conditions.
struct OptimalityReport {
  double primal_infeasibility = 0.0;  // max bound or row violation
  double dual_infeasibility = 0.0;    // max sign violation of duals / reduced costs
  double complementarity = 0.0;       // max |dual * slack|
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  [[nodiscard]] double duality_gap() const;
};

OptimalityReport check_optimality(const LinearProgram& lp,
                                  const LpSolution& solution);

/// Fixed-column MPS text, for cross-checking against external solvers.
std::string to_mps(const LinearProgram& lp, const std::string& name = "RESIL");

}  // namespace resilience::lp
