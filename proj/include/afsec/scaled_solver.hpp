#pragma once

// Exact optimum for scaled eavesdropper channels, h_e = alpha h_t with
// 0 < alpha < 1. In omega coordinates the rate depends on omega only through
// Psi = (g_s^T omega)^2 and r^2 = |omega|^2:
//     R = 1/2 log2((1 + Psi/(1 + r^2)) / (1 + alpha^2 Psi/(1 + alpha^2 r^2))).
// The optimum is either the unconstrained radius along g_s, or a point where
// a prefix of relays (ordered by |g_si| / omega_max,i, descending) sits at its
// limit and the remaining relays follow lambda * g_s. lambda is the unique
// positive root of a quartic.

#include "afsec/convex_core.hpp"
#include "afsec/network_model.hpp"

#include <array>
#include <optional>
#include <vector>

namespace afsec {

class ScaledProblem {
public:
    /// Throws Error(MethodMismatch) if h_e is not a scalar multiple of h_t and
    /// Error(InvalidAlpha) if that multiple lies outside (0, 1).
    explicit ScaledProblem(ChannelInstance instance);

    const ChannelInstance& instance() const { return inst_; }
    double alpha() const { return alpha_; }
    const Vec& g_s() const { return g_s_; }           // sqrt(gamma_s) h_s, signed
    const Vec& omega_max() const { return omega_max_; }
    /// order()[k] is the original index of the (k+1)-th relay in priority order.
    const std::vector<Eigen::Index>& order() const { return order_; }
    /// Prefix tables indexed by m = 0..M over the sorted, sign-free gains:
    /// p_m = sum_{i<=m} |g|_(i) omega_max,(i), q_m = sum_{i<=m} omega_max,(i)^2,
    /// s_m = sum_{i>m} |g|_(i)^2.
    const Vec& p() const { return p_; }
    const Vec& q() const { return q_; }
    const Vec& s() const { return s_; }

    /// Sign-free gain and limit of the k-th relay in priority order (k = 1..M).
    double sorted_gain(Eigen::Index k) const;
    double sorted_limit(Eigen::Index k) const;

private:
    ChannelInstance inst_;
    double alpha_;
    Vec g_s_, omega_max_;
    std::vector<Eigen::Index> order_;
    Vec p_, q_, s_;
};

/// r* = 1 / sqrt(alpha sqrt(1 + |g_s|^2)). Throws InvalidAlpha unless 0 < alpha < 1.
double unconstrained_radius(double alpha, double g_norm2);
double unconstrained_radius(const ScaledProblem& problem);

/// r_1..r_M; entries with a zero ordered gain are +inf, r_M = sqrt(q_M).
Vec interval_radii(const ScaledProblem& problem);

/// Coefficients (c0, c1, c2, c3) of c0 - c1 l - c2 l^2 - c3 l^3 - l^4 whose
/// positive root maximizes the rate along the m-th saturation interval. The
/// source SNR is carried by the gains (g = sqrt(gamma_s) h), so no separate
/// gamma_s factor appears.
std::array<double, 4> interval_quartic(double p, double q, double s, double alpha);

/// Candidate omega (original indexing, signed) for the interval where the
/// first m ordered relays are saturated, m in 1..M-1. Returns nullopt when the
/// stationary lambda leaves the interval (lambda >= omega_max,(m+1)/g_(m+1)).
std::optional<Vec> interval_candidate(const ScaledProblem& problem, Eigen::Index m,
                                      const SolverConfig& cfg = {});

/// Rate of omega through (Psi, r^2).
double scaled_rate(const ScaledProblem& problem, const Vec& omega);

SolveReport solve_scaled(const ScaledProblem& problem, const SolverConfig& cfg = {});

/// Instance-level entry point: alpha >= 1 yields beta = 0 and rate 0;
/// otherwise the ScaledProblem constructor's errors apply.
SolveReport solve_scaled(const ChannelInstance& inst, const SolverConfig& cfg = {});

} // namespace afsec
