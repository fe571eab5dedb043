#pragma once

// Optimal secure AF rate for degraded eavesdropper channels.
//
// The outer problem searches the eavesdropper-SNR cap eta with golden-section
// search; for fixed eta the inner problem, in v coordinates, is
//     max g_s^T v  s.t.  v^T C_e(eta) v <= 1  and the power ellipsoids,
// with g_s = sqrt(gamma_s) h_s and
//     C_e(eta) = gamma_s hhat hhat^T / eta + I - diag(rho^2),
//     rho_i = h_ie / h_it,  hhat_i = h_si rho_i.
// Individual power limits give D_i = I + e_i e_i^T / omega_max,i^2; the total
// power relaxation gives D_T = diag(1 + (h_si^2 P_s + sigma^2) / (h_it^2 P_tot)).

#include "afsec/convex_core.hpp"
#include "afsec/network_model.hpp"

namespace afsec {

enum class PowerMode { Individual, Total };

class DegradedProblem {
public:
    /// Throws Error(DegradednessViolated) unless |h_e[i]| < |h_t[i]| for all i.
    DegradedProblem(ChannelInstance instance, PowerMode mode);

    const ChannelInstance& instance() const { return inst_; }
    PowerMode mode() const { return mode_; }
    const Vec& rho() const { return rho_; }
    const Vec& h_hat() const { return h_hat_; }
    const Vec& g_s() const { return g_s_; }
    const Vec& omega_max() const { return omega_max_; }
    double P_tot() const { return P_tot_; }
    /// Diagonal of Lambda = diag(h_si^2 P_s + sigma^2).
    const Vec& lambda() const { return lambda_; }

private:
    ChannelInstance inst_;
    PowerMode mode_;
    Vec rho_, h_hat_, g_s_, omega_max_, lambda_;
    double P_tot_;
};

/// Throws Error(InvalidEta) if eta <= 0.
Mat build_Ce(const Vec& h_hat, const Vec& rho, double gamma_s, double eta);
Mat build_Ce(const DegradedProblem& problem, double eta);

EllipsoidSet build_individual_constraints(const DegradedProblem& problem);
Mat build_total_constraint(const DegradedProblem& problem);

/// gamma_s h_se^T (Lambda / P_tot + D_e)^{-1} h_se: the largest eavesdropper
/// SNR reachable under the total power constraint.
double eta_max(const DegradedProblem& problem);

struct InnerSolution {
    Vec v;
    double objective = 0.0; // g_s^T v
    LinearMaxResult details;
};

/// Inner convex problem at a fixed eta > 0 (InvalidEta otherwise).
InnerSolution solve_inner(const DegradedProblem& problem, double eta, const SolverConfig& cfg = {});

/// (1 + (g_s^T v*(eta))^2) / (1 + eta).
double eta_objective(const DegradedProblem& problem, double eta, const SolverConfig& cfg = {});

SolveReport solve_degraded(const DegradedProblem& problem, const SolverConfig& cfg = {});

} // namespace afsec
