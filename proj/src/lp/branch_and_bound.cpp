#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "internal.hpp"
#include "resilience/lp.hpp"

namespace resilience::lp {

namespace {

struct Node {
  double bound;  // parent relaxation value, minimization form
  std::int64_t id;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

LpSolution solve_milp(const LinearProgram& lp, const MilpOptions& options) {
  lp.validate();
  const int n = lp.num_variables();
  for (int j = 0; j < n; ++j) {
    if (lp.integer[j] && (lp.lower[j] < 0.0 || lp.upper[j] > 1.0)) {
      throw DataError("solve_milp: integer variable " + std::to_string(j) +
                      " must be binary (bounds within [0, 1])");
    }
  }
  const double sign = lp.sense == Sense::maximize ? -1.0 : 1.0;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::int64_t next_id = 0;
  open.push(Node{-kInf, next_id++, lp.lower, lp.upper});

  LpSolution best;
  best.status = LpStatus::infeasible;
  double incumbent = kInf;  // minimization form
  std::int64_t nodes = 0;
  std::int64_t pivots = 0;

  auto prune_threshold = [&] {
    return incumbent - std::max(options.absolute_gap, options.relative_gap * std::abs(incumbent));
  };

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.bound >= prune_threshold()) continue;
    if (nodes >= options.max_nodes) {
      double bound = node.bound;
      throw NodeLimitError("solve_milp: node limit exceeded", best.x, sign * incumbent, sign * bound);
    }
    ++nodes;
    LpSolution rel = detail::solve_relaxation(lp, node.lower, node.upper, options.lp);
    pivots += rel.iterations;
    if (rel.status == LpStatus::unbounded) {
      if (nodes == 1) {
        rel.nodes = nodes;
        return rel;
      }
      continue;
    }
    if (rel.status != LpStatus::optimal) continue;
    const double value = sign * rel.objective;
    if (value >= prune_threshold()) continue;

    // Most fractional integer variable, lowest index on ties.
    int branch = -1;
    double best_dist = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!lp.integer[j]) continue;
      const double frac = rel.x[j] - std::floor(rel.x[j]);
      const double dist = std::min(frac, 1.0 - frac);
      if (dist > options.integrality_tol && dist > best_dist + 1e-12) {
        best_dist = dist;
        branch = j;
      }
    }
    if (branch < 0) {
      for (int j = 0; j < n; ++j) {
        if (lp.integer[j]) rel.x[j] = std::round(rel.x[j]);
      }
      rel.objective = 0.0;
      for (int j = 0; j < n; ++j) rel.objective += lp.objective[j] * rel.x[j];
      incumbent = sign * rel.objective;
      best = std::move(rel);
      continue;
    }
    Node down{value, next_id++, node.lower, node.upper};
    down.upper[branch] = 0.0;
    Node up{value, next_id++, std::move(node.lower), std::move(node.upper)};
    up.lower[branch] = 1.0;
    open.push(std::move(down));
    open.push(std::move(up));
  }
  best.nodes = nodes;
  best.iterations = pivots;
  return best;
}

}  // namespace resilience::lp
