#pragma once

// Planning-problem data model: the instance, the polyhedral outage set, and
// the tri-linear outage cost.

#include <span>
#include <string>
#include <vector>

#include "resilience/error.hpp"

namespace resilience {

/// Region count, per-region costs and the two budgets. Immutable once built.
class Instance {
 public:
  Instance(std::vector<double> proactive_cost, std::vector<double> reactive_cost,
           std::vector<double> outage_cost, double proactive_budget, double reactive_budget);

  [[nodiscard]] int n() const { return static_cast<int>(b_.size()); }
  [[nodiscard]] const std::vector<double>& b() const { return b_; }
  [[nodiscard]] const std::vector<double>& c() const { return c_; }
  [[nodiscard]] const std::vector<double>& h() const { return h_; }
  [[nodiscard]] double proactive_budget() const { return budget_b_; }
  [[nodiscard]] double reactive_budget() const { return budget_c_; }

  [[nodiscard]] Instance with_budgets(double proactive_budget, double reactive_budget) const {
    return Instance(b_, c_, h_, proactive_budget, reactive_budget);
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<double> b_;
  std::vector<double> c_;
  std::vector<double> h_;
  double budget_b_;
  double budget_c_;
};

/// Local per-region intervals plus one interval on total outages.
struct UncertaintySet {
  std::vector<double> local_lower;
  std::vector<double> local_upper;
  double global_lower = 0.0;
  double global_upper = 0.0;
  double alpha = 0.1;

  [[nodiscard]] int n() const { return static_cast<int>(local_lower.size()); }

  /// Throws DataError when an interval is inverted, a lower bound is
  /// negative, or the global interval misses the sum of the local ones.
  void validate() const;

  friend bool operator==(const UncertaintySet&, const UncertaintySet&) = default;
};

/// Which rows of the outage polyhedron nature is held to.
enum class SetVariant { full, local_only, global_only };

std::string to_string(SetVariant v);
SetVariant set_variant_from_string(const std::string& s);

/// Rewrites `omega` so that only the requested rows bind. Local-only relaxes
/// the global interval to the sum of the local bounds; global-only replaces
/// every local interval with [0, global_upper].
UncertaintySet restrict_set(const UncertaintySet& omega, SetVariant variant);

struct Decision {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> u;

  /// x binary, y in [0,1], u >= 0, all of length n.
  void validate(int n) const;
};

bool feasible_proactive(std::span<const double> x, const Instance& inst);
bool feasible_reactive(std::span<const double> y, const Instance& inst);

/// sum_i h_i u_i (1 - x_i)(1 - y_i)
double outage_cost(const Instance& inst, std::span<const double> x, std::span<const double> u,
                   std::span<const double> y);

bool membership(std::span<const double> u, const UncertaintySet& omega);

}  // namespace resilience
