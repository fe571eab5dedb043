#include "afsec/degraded_solver.hpp"

#include "afsec/error.hpp"
#include "afsec/zero_forcing.hpp"

#include <cmath>
#include <utility>

namespace afsec {

namespace {

constexpr double kEtaFloor = 1e-12;

} // namespace

DegradedProblem::DegradedProblem(ChannelInstance instance, PowerMode mode)
    : inst_(std::move(instance)), mode_(mode) {
    if (!is_degraded(inst_))
        throw Error(ErrorCode::DegradednessViolated,
                    "every relay->eavesdropper gain must be smaller than its relay->destination gain");
    rho_ = inst_.h_e().cwiseQuotient(inst_.h_t());
    h_hat_ = inst_.h_s().cwiseProduct(rho_);
    g_s_ = std::sqrt(inst_.gamma_s()) * inst_.h_s();
    omega_max_ = omega_max_bounds(inst_);
    lambda_ = inst_.h_s().array().square() * inst_.P_s() + inst_.sigma2();
    P_tot_ = inst_.P_relay().sum();
}

Mat build_Ce(const Vec& h_hat, const Vec& rho, double gamma_s, double eta) {
    if (!(eta > 0.0))
        throw Error(ErrorCode::InvalidEta, "eta must be positive");
    const Vec scaled = std::sqrt(gamma_s / eta) * h_hat;
    Mat C = scaled * scaled.transpose();
    C.diagonal().array() += 1.0 - rho.array().square();
    return C;
}

Mat build_Ce(const DegradedProblem& problem, double eta) {
    return build_Ce(problem.h_hat(), problem.rho(), problem.instance().gamma_s(), eta);
}

EllipsoidSet build_individual_constraints(const DegradedProblem& problem) {
    const auto m = problem.instance().M();
    EllipsoidSet set;
    for (Eigen::Index i = 0; i < m; ++i) {
        Mat D = Mat::Identity(m, m);
        const double w = problem.omega_max()(i);
        D(i, i) += 1.0 / (w * w);
        set.add(std::move(D));
    }
    return set;
}

Mat build_total_constraint(const DegradedProblem& problem) {
    const auto& h_t = problem.instance().h_t();
    const Vec zeta = 1.0 + problem.lambda().array() / (h_t.array().square() * problem.P_tot());
    return zeta.asDiagonal();
}

double eta_max(const DegradedProblem& problem) {
    const auto& inst = problem.instance();
    const Vec h_se = inst.h_s().cwiseProduct(inst.h_e());
    const Vec d_tilde = problem.lambda() / problem.P_tot() + inst.h_e().cwiseAbs2();
    return inst.gamma_s() * (h_se.array().square() / d_tilde.array()).sum();
}

namespace {

EllipsoidSet power_constraints(const DegradedProblem& problem) {
    if (problem.mode() == PowerMode::Individual)
        return build_individual_constraints(problem);
    EllipsoidSet set;
    set.add(build_total_constraint(problem));
    return set;
}

InnerSolution solve_with(const DegradedProblem& problem, EllipsoidSet constraints,
                         const SolverConfig& cfg) {
    InnerSolution out;
    out.details = maximize_linear_over_ellipsoids(problem.g_s(), constraints, cfg);
    out.v = out.details.v;
    out.objective = out.details.value;
    return out;
}

} // namespace

InnerSolution solve_inner(const DegradedProblem& problem, double eta, const SolverConfig& cfg) {
    EllipsoidSet constraints = power_constraints(problem);
    constraints.add(build_Ce(problem, eta));
    return solve_with(problem, std::move(constraints), cfg);
}

double eta_objective(const DegradedProblem& problem, double eta, const SolverConfig& cfg) {
    const double value = solve_inner(problem, eta, cfg).objective;
    return (1.0 + value * value) / (1.0 + eta);
}

SolveReport solve_degraded(const DegradedProblem& problem, const SolverConfig& cfg) {
    cfg.validate();
    const auto& inst = problem.instance();
    const Method method =
        problem.mode() == PowerMode::Individual ? Method::DegradedIndividual : Method::DegradedTotal;

    Diagnostics diag;
    const double upper = eta_max(problem);

    // No signal reaches the eavesdropper: the eta constraint is vacuous.
    if (!(upper > 0.0)) {
        const InnerSolution sol = solve_with(problem, power_constraints(problem), cfg);
        diag.iterations = 1;
        diag.inner_iterations = sol.details.newton_iterations;
        diag.residual = std::max(sol.details.stationarity, sol.details.complementarity);
        diag.eta_star = 0.0;
        return make_report(inst, from_transformed(inst, {sol.v}), method, diag);
    }

    Vec best_v;
    double best_f = -1.0;
    double best_eta = 0.0;
    auto f = [&](double eta) {
        const double e = std::max(eta, kEtaFloor);
        const InnerSolution sol = solve_inner(problem, e, cfg);
        diag.inner_iterations += sol.details.newton_iterations;
        diag.residual =
            std::max({diag.residual, sol.details.stationarity, sol.details.complementarity});
        const double value = (1.0 + sol.objective * sol.objective) / (1.0 + e);
        if (value > best_f || (value == best_f && e < best_eta)) {
            best_f = value;
            best_eta = e;
            best_v = sol.v;
        }
        return value;
    };
    const GoldenResult golden = golden_section_max(f, 0.0, upper, cfg.golden_tol);
    diag.iterations = golden.evaluations;

    SolveReport interior = make_report(inst, from_transformed(inst, {best_v}), method, diag);
    interior.diagnostics.eta_star = best_eta;

    // eta = 0 endpoint: exact nulling at the eavesdropper. Ties go to the
    // endpoint (lower eavesdropper SNR).
    SolveReport zf = solve_zero_forcing(inst, cfg);
    if (!zf.diagnostics.degenerate && zf.rate_bits >= interior.rate_bits) {
        Diagnostics d = diag;
        d.eta_star = 0.0;
        d.note = "zero-forcing endpoint";
        return make_report(inst, std::move(zf.beta_opt), method, d);
    }
    return interior;
}

} // namespace afsec
