#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "resilience/model.hpp"

namespace testing_support {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Unit reactive costs and an integer reactive budget, like the generated instances.
inline resilience::Instance random_instance(std::mt19937_64& rng, int n, double proactive_budget,
                                            double reactive_budget) {
  std::vector<double> b(n), c(n, 1.0), h(n);
  for (int i = 0; i < n; ++i) {
    b[i] = uniform(rng, 100.0, 1000.0);
    h[i] = uniform(rng, 1000.0, 10000.0);
  }
  return resilience::Instance(b, c, h, proactive_budget, reactive_budget);
}

// Local intervals around a random center with a global interval that cuts
// into the box from both sides.
inline resilience::UncertaintySet random_set(std::mt19937_64& rng, int n) {
  resilience::UncertaintySet s;
  s.local_lower.resize(n);
  s.local_upper.resize(n);
  double lo = 0.0, up = 0.0;
  for (int i = 0; i < n; ++i) {
    const double center = uniform(rng, 0.0, 20.0);
    const double width = uniform(rng, 0.0, 8.0);
    s.local_lower[i] = std::max(0.0, center - width);
    s.local_upper[i] = center + width;
    lo += s.local_lower[i];
    up += s.local_upper[i];
  }
  const double a = uniform(rng, 0.0, 1.0), b = uniform(rng, 0.0, 1.0);
  s.global_lower = lo + std::min(a, b) * (up - lo) * 0.8;
  s.global_upper = lo + std::max(a, b) * (up - lo);
  s.global_upper = std::max(s.global_upper, s.global_lower);
  s.alpha = 0.1;
  return s;
}

inline std::vector<double> random_plan(std::mt19937_64& rng, const resilience::Instance& inst) {
  std::vector<double> x(inst.n(), 0.0);
  double spend = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    if (uniform(rng, 0.0, 1.0) < 0.4 && spend + inst.b()[i] <= inst.proactive_budget()) {
      x[i] = 1.0;
      spend += inst.b()[i];
    }
  }
  return x;
}

}  // namespace testing_support
