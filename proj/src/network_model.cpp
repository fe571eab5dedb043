#include "afsec/network_model.hpp"

#include "afsec/error.hpp"

#include <cmath>
#include <utility>

namespace afsec {

namespace {

constexpr double kRelTol = 1e-12;

bool all_finite(const Vec& x) { return x.allFinite(); }

bool close_rel(double a, double b) {
    return std::abs(a - b) <= kRelTol * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

ChannelInstance::ChannelInstance(Vec h_s, Vec h_t, Vec h_e, double P_s, Vec P_relay, double sigma2)
    : h_s_(std::move(h_s)), h_t_(std::move(h_t)), h_e_(std::move(h_e)), P_s_(P_s),
      P_relay_(std::move(P_relay)), sigma2_(sigma2) {
    const auto m = h_s_.size();
    if (m < 1)
        throw Error(ErrorCode::InvalidInstance, "relay count must be at least 1");
    if (h_t_.size() != m || h_e_.size() != m || P_relay_.size() != m)
        throw Error(ErrorCode::InvalidInstance, "h_s, h_t, h_e and P_relay must all have length M");
    if (!all_finite(h_s_) || !all_finite(h_t_) || !all_finite(h_e_) || !all_finite(P_relay_) ||
        !std::isfinite(P_s_) || !std::isfinite(sigma2_))
        throw Error(ErrorCode::InvalidInstance, "non-finite channel parameter");
    if (!(P_s_ > 0.0))
        throw Error(ErrorCode::InvalidInstance, "P_s must be positive");
    if (!(sigma2_ > 0.0))
        throw Error(ErrorCode::InvalidInstance, "sigma2 must be positive");
    if (!(P_relay_.array() > 0.0).all())
        throw Error(ErrorCode::InvalidInstance, "every relay power must be positive");
    if ((h_t_.array() == 0.0).any())
        throw Error(ErrorCode::InvalidInstance, "relay->destination gains must be nonzero");
}

ChannelInstance ChannelInstance::with_source_power(double P_s) const {
    return ChannelInstance(h_s_, h_t_, h_e_, P_s, P_relay_, sigma2_);
}

std::string_view to_string(Method m) {
    switch (m) {
    case Method::DegradedIndividual: return "degraded-individual";
    case Method::DegradedTotal: return "degraded-total";
    case Method::ZeroForcing: return "zero-forcing";
    case Method::Scaled: return "scaled";
    case Method::Symmetric: return "symmetric";
    case Method::Oracle: return "oracle";
    }
    return "unknown";
}

Vec beta_max_bounds(const ChannelInstance& inst) {
    const Vec denom = inst.h_s().array().square() * inst.P_s() + inst.sigma2();
    return (inst.P_relay().array() / denom.array()).sqrt();
}

Vec omega_max_bounds(const ChannelInstance& inst) {
    return inst.h_t().array().abs() * beta_max_bounds(inst).array();
}

double snr(const ChannelInstance& inst, const ScalingVector& beta, Node node) {
    const Vec& h_k = node == Node::Destination ? inst.h_t() : inst.h_e();
    const auto path = inst.h_s().array() * beta.beta.array() * h_k.array();
    const double amplitude = path.sum();
    const double noise = 1.0 + (beta.beta.array() * h_k.array()).square().sum();
    return inst.gamma_s() * amplitude * amplitude / noise;
}

double rate_from_snr(double snr_d, double snr_e) {
    return std::max(0.0, 0.5 * std::log2((1.0 + snr_d) / (1.0 + snr_e)));
}

double secrecy_rate(const ChannelInstance& inst, const ScalingVector& beta) {
    return rate_from_snr(snr(inst, beta, Node::Destination), snr(inst, beta, Node::Eavesdropper));
}

TransformedVector to_transformed(const ChannelInstance& inst, const ScalingVector& beta) {
    const Vec omega = inst.h_t().cwiseProduct(beta.beta);
    return {omega / std::sqrt(1.0 + omega.squaredNorm())};
}

ScalingVector from_transformed(const ChannelInstance& inst, const TransformedVector& v) {
    const double vv = v.v.squaredNorm();
    if (!(vv < 1.0))
        throw Error(ErrorCode::NonInvertible, "v^T v must be strictly below 1");
    const Vec omega = v.v / std::sqrt(1.0 - vv);
    return {omega.cwiseQuotient(inst.h_t())};
}

bool is_degraded(const ChannelInstance& inst) {
    return (inst.h_e().array().abs() < inst.h_t().array().abs()).all();
}

std::optional<double> scale_factor(const ChannelInstance& inst) {
    const double alpha = inst.h_e()(0) / inst.h_t()(0);
    for (Eigen::Index i = 1; i < inst.M(); ++i) {
        if (!close_rel(inst.h_e()(i), alpha * inst.h_t()(i)))
            return std::nullopt;
    }
    return alpha;
}

bool is_scaled(const ChannelInstance& inst) {
    const auto alpha = scale_factor(inst);
    return alpha && *alpha > 0.0 && *alpha < 1.0;
}

bool is_symmetric(const ChannelInstance& inst) {
    for (Eigen::Index i = 1; i < inst.M(); ++i) {
        if (!close_rel(inst.h_s()(i), inst.h_s()(0)) || !close_rel(inst.h_t()(i), inst.h_t()(0)) ||
            !close_rel(inst.h_e()(i), inst.h_e()(0)) ||
            !close_rel(inst.P_relay()(i), inst.P_relay()(0)))
            return false;
    }
    return true;
}

SolveReport make_report(const ChannelInstance& inst, ScalingVector beta, Method method,
                        Diagnostics diag) {
    SolveReport report;
    report.snr_d = snr(inst, beta, Node::Destination);
    report.snr_e = snr(inst, beta, Node::Eavesdropper);
    report.rate_bits = rate_from_snr(report.snr_d, report.snr_e);
    report.beta_opt = std::move(beta);
    report.method = method;
    report.diagnostics = std::move(diag);
    return report;
}

} // namespace afsec
