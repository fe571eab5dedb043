#pragma once

// Diamond relay network with one eavesdropper: channel data, SNR and
// secrecy-rate evaluation, and the beta <-> omega <-> v coordinate maps.
//
// Conventions used throughout the library:
//   omega_i = h_t[i] * beta_i
//   v       = omega / sqrt(1 + omega^T omega)
// Rates are in bits per channel use (log base 2).

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>

namespace afsec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class ChannelInstance {
public:
    /// Throws Error(InvalidInstance) on length mismatch, non-positive powers
    /// or noise, non-finite entries, or any zero relay->destination gain.
    ChannelInstance(Vec h_s, Vec h_t, Vec h_e, double P_s, Vec P_relay, double sigma2);

    Eigen::Index M() const { return h_s_.size(); }
    const Vec& h_s() const { return h_s_; }
    const Vec& h_t() const { return h_t_; }
    const Vec& h_e() const { return h_e_; }
    double P_s() const { return P_s_; }
    const Vec& P_relay() const { return P_relay_; }
    double sigma2() const { return sigma2_; }

    /// P_s / sigma^2
    double gamma_s() const { return P_s_ / sigma2_; }

    /// Copy of this instance with a different source power.
    ChannelInstance with_source_power(double P_s) const;

private:
    Vec h_s_, h_t_, h_e_;
    double P_s_;
    Vec P_relay_;
    double sigma2_;
};

struct ScalingVector {
    Vec beta;
};

struct TransformedVector {
    Vec v;
};

enum class Node { Destination, Eavesdropper };

enum class Method { DegradedIndividual, DegradedTotal, ZeroForcing, Scaled, Symmetric, Oracle };

std::string_view to_string(Method m);

struct Diagnostics {
    int iterations = 0;       // outer iterations (line-search evaluations, grid rounds, ...)
    int inner_iterations = 0; // Newton steps summed over all inner solves
    double residual = 0.0;    // worst KKT / feasibility residual seen
    std::optional<double> eta_star;
    bool degenerate = false;  // set when a solver fell back to the zero-rate answer
    std::string note;
};

struct SolveReport {
    ScalingVector beta_opt;
    double snr_d = 0.0;
    double snr_e = 0.0;
    double rate_bits = 0.0;
    Method method = Method::Oracle;
    Diagnostics diagnostics;
};

/// beta_{i,max} = sqrt(P_i / (h_si^2 P_s + sigma^2)).
Vec beta_max_bounds(const ChannelInstance& inst);

/// omega_{i,max} = |h_it| beta_{i,max}.
Vec omega_max_bounds(const ChannelInstance& inst);

/// gamma_s (sum h_si beta_i h_ik)^2 / (1 + sum beta_i^2 h_ik^2).
double snr(const ChannelInstance& inst, const ScalingVector& beta, Node node);

/// 0.5 log2((1 + snr_d) / (1 + snr_e)), clamped below at zero.
double rate_from_snr(double snr_d, double snr_e);

double secrecy_rate(const ChannelInstance& inst, const ScalingVector& beta);

TransformedVector to_transformed(const ChannelInstance& inst, const ScalingVector& beta);

/// Throws Error(NonInvertible) when v^T v >= 1.
ScalingVector from_transformed(const ChannelInstance& inst, const TransformedVector& v);

/// |h_e[i]| < |h_t[i]| for every relay.
bool is_degraded(const ChannelInstance& inst);

/// The scalar alpha with h_e = alpha h_t (relative tolerance 1e-12), if one
/// exists. Any real alpha is returned; callers check 0 < alpha < 1.
std::optional<double> scale_factor(const ChannelInstance& inst);

/// 0 < alpha < 1 and h_e = alpha h_t.
bool is_scaled(const ChannelInstance& inst);

/// Every relay has identical h_s, h_t, h_e and power (relative tolerance 1e-12).
bool is_symmetric(const ChannelInstance& inst);

/// Evaluates both SNRs and the clamped rate at beta.
SolveReport make_report(const ChannelInstance& inst, ScalingVector beta, Method method,
                        Diagnostics diag = {});

} // namespace afsec
