#pragma once

// Brute-force maximizer of the secrecy rate over a box of scaling factors,
// used to validate the structured solvers. Deterministic: the grid is walked
// in lexicographic order and ties keep the earliest (smallest) point.

#include "afsec/network_model.hpp"

#include <cstdint>

namespace afsec {

enum class OracleConstraint { Individual, Total, ZeroForcing };

struct OracleOptions {
    std::uint64_t max_evaluations = 200'000'000; // cap on steps^M for the coarse grid
    unsigned threads = 0;                        // 0 = hardware concurrency
    double zf_tolerance = 1e-6;                  // |h_se^T beta| <= tol |h_se| |beta|
};

/// Exhaustive grid of steps_per_axis points on each [-beta_max,i, beta_max,i],
/// then refine_rounds local grids, each with 10x finer spacing, spanning one
/// old cell either side of the incumbent. Throws Error(BudgetExceeded) when
/// steps_per_axis^M exceeds options.max_evaluations.
SolveReport grid_oracle(const ChannelInstance& inst, int steps_per_axis, int refine_rounds,
                        const OracleOptions& options = {});

/// Same search restricted to a constraint set:
///   Individual  - the beta_max box (identical to grid_oracle);
///   Total       - beta^T Lambda beta <= P_tot, gridded over its bounding box;
///   ZeroForcing - each grid point is projected onto h_se^T beta = 0 and scaled
///                 back into the box, which keeps the projection exact.
SolveReport constrained_oracle(const ChannelInstance& inst, OracleConstraint constraint,
                               int steps_per_axis, int refine_rounds,
                               const OracleOptions& options = {});

} // namespace afsec
