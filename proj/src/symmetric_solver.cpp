#include "afsec/symmetric_solver.hpp"

#include "afsec/error.hpp"

#include <cmath>
#include <limits>

namespace afsec {

double SymmetricInstance::beta_max() const {
    return std::sqrt(P_R / (h_s * h_s * P_s + sigma2));
}

SymmetricInstance SymmetricInstance::from_instance(const ChannelInstance& inst) {
    if (!is_symmetric(inst))
        throw Error(ErrorCode::MethodMismatch, "relays are not identical");
    return {inst.M(), inst.h_s()(0), inst.h_t()(0), inst.h_e()(0),
            inst.P_s(), inst.P_relay()(0), inst.sigma2()};
}

ChannelInstance SymmetricInstance::to_instance() const {
    return ChannelInstance(Vec::Constant(M, h_s), Vec::Constant(M, h_t), Vec::Constant(M, h_e), P_s,
                           Vec::Constant(M, P_R), sigma2);
}

double single_relay_stationary_beta(const SingleRelayParams& p) {
    const double gains = p.h_rd * p.h_rd * p.h_re * p.h_re;
    if (gains == 0.0)
        return std::numeric_limits<double>::infinity();
    const double own_max2 = p.P_R / (p.h_sr * p.h_sr * p.P_s + p.sigma2);
    return std::pow(p.sigma2 / (p.P_R * gains) * own_max2, 0.25);
}

double single_relay_beta(const SingleRelayParams& p) {
    const double cap = p.beta_cap.value_or(std::sqrt(p.P_R / (p.h_sr * p.h_sr * p.P_s + p.sigma2)));
    const double stationary = single_relay_stationary_beta(p);
    return stationary < cap ? stationary : cap;
}

double symmetric_beta_star(const SymmetricInstance& inst) {
    const double k = std::sqrt(static_cast<double>(inst.M));
    return single_relay_beta({k * inst.h_s, k * inst.h_t, k * inst.h_e, inst.P_s, inst.P_R,
                              inst.sigma2, inst.beta_max()});
}

double symmetric_rate_at(const SymmetricInstance& inst, double beta) {
    const double m = static_cast<double>(inst.M);
    const double b2 = beta * beta;
    const double signal = inst.gamma_s() * m * m * b2 * inst.h_s * inst.h_s;
    const double snr_d = signal * inst.h_t * inst.h_t / (1.0 + m * b2 * inst.h_t * inst.h_t);
    const double snr_e = signal * inst.h_e * inst.h_e / (1.0 + m * b2 * inst.h_e * inst.h_e);
    return rate_from_snr(snr_d, snr_e);
}

SolveReport symmetric_rate(const SymmetricInstance& inst) {
    const double beta = symmetric_beta_star(inst);
    Diagnostics diag;
    diag.note = beta < inst.beta_max() ? "interior stationary point" : "relay power limit";
    return make_report(inst.to_instance(), {Vec::Constant(inst.M, beta)}, Method::Symmetric, diag);
}

double symmetric_upper_bound(const ChannelInstance& inst) {
    SymmetricInstance sym{inst.M(),
                          inst.h_s().cwiseAbs().maxCoeff(),
                          inst.h_t().cwiseAbs().maxCoeff(),
                          inst.h_e().cwiseAbs().minCoeff(),
                          inst.P_s(),
                          inst.P_relay().maxCoeff(),
                          inst.sigma2()};
    return symmetric_rate_at(sym, symmetric_beta_star(sym));
}

} // namespace afsec
