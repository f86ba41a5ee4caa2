#pragma once

#include <span>

#include "resilience/lp.hpp"

namespace resilience::lp::detail {

/// Solves the continuous relaxation of `lp` with the variable bounds replaced
/// by `lower` / `upper` (integrality ignored).
LpSolution solve_relaxation(const LinearProgram& lp,
                            std::span<const double> lower,
                            std::span<const double> upper,
                            const LpOptions& options);

}  // namespace resilience::lp::detail
