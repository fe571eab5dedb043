#pragma once

// Zero-forcing lower bound: the relays cancel the source signal at the
// eavesdropper exactly while maximizing the destination SNR.
//
// With omega_i = h_it beta_i and vhat = h_s^T omega, the variable
// w = [omega / vhat, 1 / vhat] turns the problem into
//     min w^T w  s.t.  [h_s^T 0] w = 1,  [hhat^T 0] w = 0,
//                      -omega_max,i w_{M+1} <= w_i <= omega_max,i w_{M+1},
// where hhat_i = h_si h_ie / h_it. Since w^T w = 1 / Gamma_t, minimizing the
// norm maximizes the destination SNR.

#include "afsec/convex_core.hpp"
#include "afsec/network_model.hpp"

namespace afsec {

struct ZfQp {
    Mat Heq;   // 2 x (M+1)
    Vec beq;   // [1, 0]
    Mat Gineq; // 2M x (M+1)
};

ZfQp assemble_zf_qp(const ChannelInstance& inst);

/// Never throws for a valid instance: when nulling forces the destination
/// signal to zero as well (M = 1 with h_e != 0, or h_s*h_e parallel to
/// h_s*h_t) the report carries beta = 0, rate 0 and diagnostics.degenerate.
SolveReport solve_zero_forcing(const ChannelInstance& inst, const SolverConfig& cfg = {});

} // namespace afsec
