#pragma once

// Closed forms for the symmetric diamond network (identical relays) and the
// single-relay network it reduces to once all scaling factors are equal.

#include "afsec/network_model.hpp"

#include <optional>

namespace afsec {

struct SymmetricInstance {
    Eigen::Index M = 1;
    double h_s = 1.0;
    double h_t = 1.0;
    double h_e = 0.0;
    double P_s = 1.0;
    double P_R = 1.0;
    double sigma2 = 1.0;

    double gamma_s() const { return P_s / sigma2; }
    /// beta_max^2 = P_R / (h_s^2 P_s + sigma^2).
    double beta_max() const;

    /// Throws Error(MethodMismatch) unless every relay is identical.
    static SymmetricInstance from_instance(const ChannelInstance& inst);
    ChannelInstance to_instance() const;
};

struct SingleRelayParams {
    double h_sr = 1.0;
    double h_rd = 1.0;
    double h_re = 0.0;
    double P_s = 1.0;
    double P_R = 1.0;
    double sigma2 = 1.0;
    /// Feasibility cap on beta. Defaults to the relay's own limit
    /// sqrt(P_R / (h_sr^2 P_s + sigma^2)).
    std::optional<double> beta_cap;
};

/// Stationary point beta^4 = sigma^2 / (P_R h_rd^2 h_re^2) * beta_max^2 with
/// beta_max the relay's own limit; infinite when h_rd h_re = 0.
double single_relay_stationary_beta(const SingleRelayParams& p);

/// Optimal single-relay scaling: the stationary point when it lies below the
/// cap, the cap otherwise (the objective increases up to the stationary point).
double single_relay_beta(const SingleRelayParams& p);

/// Common optimal scaling factor of every relay. Equal to the single-relay
/// optimum with gains scaled by sqrt(M), capped at this network's beta_max.
double symmetric_beta_star(const SymmetricInstance& inst);

/// Rate with all relays at a common factor beta.
double symmetric_rate_at(const SymmetricInstance& inst, double beta);

SolveReport symmetric_rate(const SymmetricInstance& inst);

/// Optimal rate of the M-relay symmetric network built from max |h_s|,
/// max |h_t|, min |h_e| and max P_i of a general instance.
double symmetric_upper_bound(const ChannelInstance& inst);

} // namespace afsec
