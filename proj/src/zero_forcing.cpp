#include "afsec/zero_forcing.hpp"

#include "afsec/error.hpp"

namespace afsec {

ZfQp assemble_zf_qp(const ChannelInstance& inst) {
    const auto m = inst.M();
    const Vec rho = inst.h_e().cwiseQuotient(inst.h_t());
    const Vec omega_max = omega_max_bounds(inst);

    ZfQp qp;
    qp.Heq = Mat::Zero(2, m + 1);
    qp.Heq.row(0).head(m) = inst.h_s().transpose();
    qp.Heq.row(1).head(m) = inst.h_s().cwiseProduct(rho).transpose();
    qp.beq = Vec::Zero(2);
    qp.beq(0) = 1.0;

    qp.Gineq = Mat::Zero(2 * m, m + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        qp.Gineq(2 * i, i) = 1.0;
        qp.Gineq(2 * i, m) = -omega_max(i);
        qp.Gineq(2 * i + 1, i) = -1.0;
        qp.Gineq(2 * i + 1, m) = -omega_max(i);
    }
    return qp;
}

SolveReport solve_zero_forcing(const ChannelInstance& inst, const SolverConfig& cfg) {
    const auto m = inst.M();
    const ZfQp qp = assemble_zf_qp(inst);
    Diagnostics diag;
    QpResult sol;
    try {
        sol = min_norm_qp(qp.Heq, qp.beq, qp.Gineq, cfg);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Infeasible)
            throw;
        diag.degenerate = true;
        diag.note = "zero-forcing infeasible: nulling the eavesdropper also nulls the destination";
        return make_report(inst, {Vec::Zero(m)}, Method::ZeroForcing, diag);
    }
    const double scale = sol.w(m);
    if (!(scale > 0.0)) {
        diag.degenerate = true;
        diag.note = "zero-forcing solution has no finite scaling";
        return make_report(inst, {Vec::Zero(m)}, Method::ZeroForcing, diag);
    }
    Vec omega = sol.w.head(m) / scale;
    // Round-off can leave the box by a few ulps; shrink along the null line.
    const double excess = omega.cwiseAbs().cwiseQuotient(omega_max_bounds(inst)).maxCoeff();
    if (excess > 1.0)
        omega /= excess;
    diag.iterations = sol.iterations;
    diag.residual = std::max({sol.eq_residual, sol.ineq_violation, sol.kkt_residual});
    return make_report(inst, {omega.cwiseQuotient(inst.h_t())}, Method::ZeroForcing, diag);
}

} // namespace afsec
