#include "resilience/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace resilience {

namespace {

void require_length(std::size_t got, int n, const char* what) {
  if (static_cast<int>(got) != n) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                         std::to_string(got));
  }
}

bool all_positive_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a) && a > 0.0; });
}

}  // namespace

Instance::Instance(std::vector<double> proactive_cost, std::vector<double> reactive_cost,
                   std::vector<double> outage_cost, double proactive_budget, double reactive_budget)
    : b_(std::move(proactive_cost)),
      c_(std::move(reactive_cost)),
      h_(std::move(outage_cost)),
      budget_b_(proactive_budget),
      budget_c_(reactive_budget) {
  if (b_.empty()) throw DataError("Instance: region count must be at least 1");
  require_length(c_.size(), n(), "Instance reactive costs");
  require_length(h_.size(), n(), "Instance outage costs");
  if (!all_positive_finite(b_) || !all_positive_finite(c_) || !all_positive_finite(h_)) {
    throw DataError("Instance: costs b, c, h must be finite and strictly positive");
  }
  if (!(budget_b_ >= 0.0) || !(budget_c_ >= 0.0) || !std::isfinite(budget_b_) ||
      !std::isfinite(budget_c_)) {
    throw DataError("Instance: budgets must be finite and nonnegative");
  }
}

void UncertaintySet::validate() const {
  if (local_lower.empty()) throw DataError("UncertaintySet: empty");
  require_length(local_upper.size(), n(), "UncertaintySet local_upper");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("UncertaintySet: alpha must lie in (0,1)");
  double lo_sum = 0.0;
  double up_sum = 0.0;
  for (int i = 0; i < n(); ++i) {
    if (!(local_lower[i] >= 0.0) || !(local_lower[i] <= local_upper[i])) {
      throw DataError("UncertaintySet: bad local interval for region " + std::to_string(i));
    }
    lo_sum += local_lower[i];
    up_sum += local_upper[i];
  }
  if (!(global_lower >= 0.0) || !(global_lower <= global_upper)) {
    throw DataError("UncertaintySet: bad global interval");
  }
  const double tol = 1e-9 * (1.0 + up_sum);
  if (global_upper < lo_sum - tol || global_lower > up_sum + tol) {
    throw DataError("UncertaintySet: global interval does not meet the sum of local intervals");
  }
}

std::string to_string(SetVariant v) {
  switch (v) {
    case SetVariant::full: return "full";
    case SetVariant::local_only: return "local_only";
    case SetVariant::global_only: return "global_only";
  }
  return "full";
}

SetVariant set_variant_from_string(const std::string& s) {
  if (s == "full") return SetVariant::full;
  if (s == "local_only") return SetVariant::local_only;
  if (s == "global_only") return SetVariant::global_only;
  throw DataError("unknown set variant '" + s + "'");
}

UncertaintySet restrict_set(const UncertaintySet& omega, SetVariant variant) {
  UncertaintySet out = omega;
  switch (variant) {
    case SetVariant::full: break;
    case SetVariant::local_only:
      out.global_lower = std::accumulate(omega.local_lower.begin(), omega.local_lower.end(), 0.0);
      out.global_upper = std::accumulate(omega.local_upper.begin(), omega.local_upper.end(), 0.0);
      break;
    case SetVariant::global_only:
      std::fill(out.local_lower.begin(), out.local_lower.end(), 0.0);
      std::fill(out.local_upper.begin(), out.local_upper.end(), omega.global_upper);
      break;
  }
  return out;
}

void Decision::validate(int n) const {
  require_length(x.size(), n, "Decision x");
  require_length(y.size(), n, "Decision y");
  require_length(u.size(), n, "Decision u");
  for (int i = 0; i < n; ++i) {
    if (x[i] != 0.0 && x[i] != 1.0) throw DataError("Decision: x must be binary");
    if (!(y[i] >= 0.0 && y[i] <= 1.0)) throw DataError("Decision: y must lie in [0,1]");
    if (!(u[i] >= 0.0)) throw DataError("Decision: u must be nonnegative");
  }
}

bool feasible_proactive(std::span<const double> x, const Instance& inst) {
  require_length(x.size(), inst.n(), "feasible_proactive");
  double spend = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    if (x[i] != 0.0 && x[i] != 1.0) return false;
    spend += inst.b()[i] * x[i];
  }
  return spend <= inst.proactive_budget();
}

bool feasible_reactive(std::span<const double> y, const Instance& inst) {
  require_length(y.size(), inst.n(), "feasible_reactive");
  double spend = 0.0;
  for (int i = 0; i < inst.n(); ++i) spend += inst.c()[i] * y[i];
  return spend <= inst.reactive_budget();
}

double outage_cost(const Instance& inst, std::span<const double> x, std::span<const double> u,
                   std::span<const double> y) {
  require_length(x.size(), inst.n(), "outage_cost x");
  require_length(u.size(), inst.n(), "outage_cost u");
  require_length(y.size(), inst.n(), "outage_cost y");
  double total = 0.0;
  for (int i = 0; i < inst.n(); ++i) total += inst.h()[i] * u[i] * (1.0 - x[i]) * (1.0 - y[i]);
  return total;
}

bool membership(std::span<const double> u, const UncertaintySet& omega) {
  require_length(u.size(), omega.n(), "membership");
  double total = 0.0;
  for (int i = 0; i < omega.n(); ++i) {
    if (u[i] < omega.local_lower[i] || u[i] > omega.local_upper[i]) return false;
    total += u[i];
  }
  return total >= omega.global_lower && total <= omega.global_upper;
}

}  // namespace resilience
